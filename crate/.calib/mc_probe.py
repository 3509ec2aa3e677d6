"""Fixed MC probe: lemma22 estimator with near-barrier substepping."""
import numpy as np
from math import sqrt, erf

rng = np.random.default_rng(12345)
a, b, t, h = 2.0, 1.0, 10.0, 0.01
paths = 200_000
true_val = 0.5 * erf(1.0 / sqrt(20.0))
B2 = b * b

def step_ncx2(x, hh, rng):
    """one exact squared-Bessel (delta=3) transition of size hh"""
    z = rng.standard_normal(x.size)
    chi = 2.0 * rng.standard_gamma(1.0, x.size)  # chi^2_2
    return hh * (chi + (z + np.sqrt(x / hh)) ** 2)

def run(sub):
    X = np.full(paths, a * a)
    alive = np.ones(paths, bool)
    n = int(round(t / h))
    thresh = (b + 0.6) ** 2
    for _ in range(n):
        idx = np.where(alive)[0]
        x = X[idx]
        if sub > 1:
            near = x < thresh
            xf = step_ncx2(x[~near], h, rng)
            xn = x[near]
            sub_alive = np.ones(xn.size, bool)
            hs = h / sub
            for _ in range(sub):
                ii = np.where(sub_alive)[0]
                if ii.size == 0:
                    break
                xs = step_ncx2(xn[ii], hs, rng)
                died = xs <= B2
                xn[ii] = xs
                sub_alive[ii[died]] = False
            x_new = np.empty_like(x)
            x_new[~near] = xf
            x_new[near] = xn
            dead = (x_new <= B2)
            dead_near = near.copy()
            dead_near[near] = ~sub_alive
            dead |= dead_near
        else:
            x_new = step_ncx2(x, h, rng)
            dead = x_new <= B2
        X[idx] = x_new
        alive[idx[dead]] = False
    payoff = np.zeros(paths)
    payoff[alive] = (b / np.sqrt(X[alive]))  # 2nu = 1
    return payoff.mean(), payoff.std(ddof=1) / sqrt(paths)

for sub in (1, 16, 64):
    m, se = run(sub)
    print(f"substeps={sub:3d}: mean={m:.6f} bias={m - true_val:+.5f} se={se:.5f}")
print(f"true={true_val:.6f}")
