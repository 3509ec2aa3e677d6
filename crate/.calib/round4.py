"""Round 4:
(a) early-time kernel route: phi = exp(-(a-b)s) * g(lam), F = h_c * Ghat,
    h_c = inverse-Gaussian density; accuracy at t in {0.1, 1, 3, 10}, nu=0.5, 1.0
(b) split with T1..T6 subtractions at nu=1.5, 2.5 over t in [1e2, 1e6]
(c) numpy MC: lemma22 estimator bias at h=0.01 with and without near-barrier
    substepping (nu=1/2, a=2, b=1, t=10), 2e5 paths
"""
from fractions import Fraction
from math import factorial, log, sqrt, exp, erf, pi, sin, gamma as g_
import numpy as np
import mpmath as mp
mp.mp.dps = 40

def stehfest_weights_exact(N):
    M = N // 2
    V = []
    for k in range(1, N + 1):
        s = Fraction(0)
        for j in range((k + 1) // 2, min(k, M) + 1):
            s += Fraction(j ** M) * factorial(2 * j) / (
                factorial(M - j) * factorial(j) * factorial(j - 1)
                * factorial(k - j) * factorial(2 * j - k))
        V.append((-1 if (M + k) % 2 else 1) * s)
    return V

W = {N: [float(v) for v in stehfest_weights_exact(N)] for N in (12, 14)}

def invert(psi, t, N):
    ln2t = log(2) / t
    s = 0.0; c = 0.0
    for k in range(1, N + 1):
        term = W[N][k - 1] * psi(k * ln2t)
        tmp = s + term
        c += (s - tmp) + term if abs(s) >= abs(term) else (term - tmp) + s
        s = tmp
    return (s + c) * ln2t

def ktilde(nu, z):
    return float(mp.besselk(nu, z) * mp.exp(z))

def g_fun(nu, a, b, lam):
    s = sqrt(2 * lam)
    hp_nu = (b / a) ** nu
    return hp_nu * ktilde(nu, a * s) / ktilde(nu, b * s)

def kernel_F(nu, a, b, t, N, nodes=48):
    """F(t) = int_0^t h_c(u) Ghat(t-u) du, h_c = c exp(-c^2/2u)/sqrt(2 pi u^3)."""
    c = a - b
    # Gauss-Legendre on [0, t]
    xs, ws = np.polynomial.legendre.leggauss(nodes)
    us = 0.5 * t * (xs + 1.0)
    wq = 0.5 * t * ws
    tot = 0.0
    for u, w in zip(us, wq):
        if c * c / (2 * u) > 700:
            continue
        h = c * exp(-c * c / (2 * u)) / sqrt(2 * pi * u ** 3)
        Gh = invert(lambda lam: g_fun(nu, a, b, lam) / lam, t - u, N) \
            if t - u > 1e-12 * t else g_fun(nu, a, b, 1e300)  # ~limit
        tot += w * h * Gh
    return tot

print("== kernel route, nu=0.5 (true tail = 0.5 erf(1/sqrt(2t))) ==")
for t in (0.1, 1.0, 3.0, 10.0):
    true_tail = 0.5 * erf(1.0 / sqrt(2 * t))
    F14 = kernel_F(0.5, 2, 1, t, 14)
    F12 = kernel_F(0.5, 2, 1, t, 12)
    tail14 = 0.5 - F14
    print(f" t={t:5g} F={F14:.8e} tail_rel_err={(tail14-true_tail)/true_tail:+.2e} "
          f"ladder={abs(F14-F12)/max(tail14,1e-300):.1e}")

print("\n== kernel route, nu=1.0 at t=1 (C8 low end) ==")
def true_tail_mp(nu, a, b, t):
    hp = (mp.mpf(b) / a) ** (2 * nu)
    def f(lam):
        s = mp.sqrt(2 * lam)
        ph = (mp.mpf(b) / a) ** nu * mp.besselk(nu, a * s) / mp.besselk(nu, b * s)
        return (hp - ph) / lam
    return float(mp.invertlaplace(f, t, method='talbot', degree=70))
for t in (0.5, 1.0, 2.0):
    tru = true_tail_mp(1.0, 2, 1, t)
    F14 = kernel_F(1.0, 2, 1, t, 14)
    tail14 = 0.25 - F14
    print(f" t={t:4g} true={tru:.8e} kernel_rel={(tail14-tru)/tru:+.2e}")

# ---------------------------------------------------------------------------
def recip_gamma(x):
    if x > 0:
        return 1.0 / g_(x)
    return sin(pi * x) / pi * g_(1.0 - x)

class Poly2:
    def __init__(self, c0, c1, c2):
        self.c = (c0, c1, c2)
    def mul(self, o):
        a, b_ = self.c, o.c
        return Poly2(a[0] * b_[0], a[0] * b_[1] + a[1] * b_[0],
                     a[0] * b_[2] + a[1] * b_[1] + a[2] * b_[0])
    def div(self, o):
        a, b_ = self.c, o.c
        q0 = a[0] / b_[0]
        q1 = (a[1] - q0 * b_[1]) / b_[0]
        q2 = (a[2] - q0 * b_[2] - q1 * b_[1]) / b_[0]
        return Poly2(q0, q1, q2)

class Split3:
    def __init__(self, nu, a, b):
        self.nu, self.a, self.b = nu, a, b
        self.hp = (b / a) ** (2 * nu)
        C = pi / (2 * sin(pi * nu))
        self.C = C
        def coef_n0(k):
            return C * 2 ** nu * (b ** (2 * k) - a ** (2 * k)) \
                * recip_gamma(k + 1 - nu) * (0.5 ** k) / factorial(k)
        def coef_n1(k):
            return -C * 2 ** (-nu) * (b ** (2 * nu + 2 * k) - a ** (2 * nu + 2 * k)) \
                * recip_gamma(k + 1 + nu) * (0.5 ** k) / factorial(k)
        def coef_d0(k):
            return C * 2 ** nu * (b ** (2 * k)) * recip_gamma(k + 1 - nu) \
                * (0.5 ** k) / factorial(k)
        def coef_d1(k):
            return -C * 2 ** (-nu) * b ** (2 * nu + 2 * k) * recip_gamma(k + 1 + nu) \
                * (0.5 ** k) / factorial(k)
        n0 = Poly2(0.0, coef_n0(1), coef_n0(2))
        n1 = Poly2(coef_n1(0), coef_n1(1), coef_n1(2))
        d0 = Poly2(coef_d0(0), coef_d0(1), coef_d0(2))
        d1 = Poly2(coef_d1(0), coef_d1(1), coef_d1(2))
        num = Poly2(*[n1.mul(d0).c[i] - n0.mul(d1).c[i] for i in range(3)])
        Ran = num.div(d0.mul(d0))
        Ran = Poly2(self.hp * Ran.c[0], self.hp * Ran.c[1], self.hp * Ran.c[2])
        q = d1.div(d0)
        self.Ran, self.q = Ran, q
        Rq = Ran.mul(q)
        Rq2 = Rq.mul(q)
        nu_ = nu
        # analytic tail terms: sum_j L_j * t^{-e_j}
        self.terms = [
            (2 ** nu_ * Ran.c[0] * recip_gamma(1 - nu_), nu_),
            (2 ** nu_ * Ran.c[1] * recip_gamma(-nu_), nu_ + 1),
            (2 ** nu_ * Ran.c[2] * recip_gamma(-nu_ - 1), nu_ + 2),
            (-2 ** (2 * nu_) * Rq.c[0] * recip_gamma(1 - 2 * nu_), 2 * nu_),
            (-2 ** (2 * nu_) * Rq.c[1] * recip_gamma(-2 * nu_), 2 * nu_ + 1),
            (2 ** (3 * nu_) * Rq2.c[0] * recip_gamma(1 - 3 * nu_), 3 * nu_),
        ]

    def G(self, mu, w):
        tot = 0.0; term_k = 1.0
        for k in range(0, 160):
            c = recip_gamma(k + 1 + mu)
            tot += term_k * c
            term_k *= w / (k + 1)
            if abs(term_k) * max(abs(c), 1.0) < 1e-18 * max(abs(tot), 1e-300) and k > 3:
                break
        return tot

    def remainder(self, lam):
        nu, a, b, C = self.nu, self.a, self.b, self.C
        wa = lam * a * a / 2; wb = lam * b * b / 2
        n0 = 0.0; pk = 1.0
        for k in range(1, 160):
            pk *= lam / 2 / k
            term = pk * (b ** (2 * k) - a ** (2 * k)) * recip_gamma(k + 1 - nu)
            n0 += term
            if abs(term) < 1e-18 * max(abs(n0), 1e-300) and k > 3:
                break
        n0 *= C * 2 ** nu
        n1 = -C * 2 ** (-nu) * (b ** (2 * nu) * self.G(nu, wb)
                                - a ** (2 * nu) * self.G(nu, wa))
        d0 = C * 2 ** nu * self.G(-nu, wb)
        d1 = -C * 2 ** (-nu) * b ** (2 * nu) * self.G(nu, wb)
        x = (2 * lam) ** nu
        R = self.hp * (n1 * d0 - n0 * d1) / (d0 * (d0 + x * d1))
        Ran, q = self.Ran, self.q
        sub = (Ran.c[0] + Ran.c[1] * lam + Ran.c[2] * lam * lam) \
            - x * ((Ran.c[0] * q.c[0]) + (Ran.c[0] * q.c[1] + Ran.c[1] * q.c[0]) * lam) \
            + x * x * (Ran.c[0] * q.c[0] * q.c[0])
        return 2 ** nu * lam ** (nu - 1.0) * (R - sub)

    def tail(self, t, N):
        lead = sum(L * t ** (-e) for (L, e) in self.terms)
        return lead + invert(self.remainder, t, N)

print("\n== Split3 (T1..T6) nu=1.5, 2.5 ==")
for nu in (1.5, 2.5):
    se = Split3(nu, 2.0, 1.0)
    for t in (1e2, 1e3, 1e4, 1e5):
        tru = true_tail_mp(nu, 2, 1, t)
        v14 = se.tail(t, 14); v12 = se.tail(t, 12)
        lad = abs(v14 - v12) / max(abs(v14), 1e-300)
        print(f" nu={nu} t={t:8.0e} rel={(v14-tru)/tru:+.1e} ladder={lad:.1e}")

# ---------------------------------------------------------------------------
print("\n== numpy MC lemma22 bias probe (nu=1/2 => delta=3), 2e5 paths ==")
rng = np.random.default_rng(12345)
a, b, t, h = 2.0, 1.0, 10.0, 0.01
paths = 200_000
true_val = 0.5 * erf(1.0 / sqrt(20.0))

def run(refine):
    X = np.full(paths, a * a)
    alive = np.ones(paths, bool)
    n = int(round(t / h))
    for _ in range(n):
        x = X[alive]
        if refine:
            # substep when R < b + 0.6  (6*sqrt(h) = 0.6)
            near = x < (b + 0.6) ** 2
            far = ~near
            xf = x[far]
            # one coarse step for far
            z = rng.standard_normal(xf.size)
            chi = 2.0 * rng.standard_gamma(1.0, xf.size)  # chi^2_2
            xf = h * (chi + (z + np.sqrt(xf / h)) ** 2)
            xn = x[near]
            hs = h / 16
            for _ in range(16):
                z = rng.standard_normal(xn.size)
                chi = 2.0 * rng.standard_gamma(1.0, xn.size)
                xn = hs * (chi + (z + np.sqrt(xn / hs)) ** 2)
                # in-substep barrier check
                dead = xn <= b * b
                # mark, keep simulating (cheap) - handle after loop via min tracking
                xn = np.where(dead, -1.0, xn)  # flag dead
                if (xn < 0).all():
                    break
            x2 = np.empty_like(x)
            x2[far] = xf
            x2[near] = xn
            x = x2
        else:
            z = rng.standard_normal(x.size)
            chi = 2.0 * rng.standard_gamma(1.0, x.size)
            x = h * (chi + (z + np.sqrt(x / h)) ** 2)
        dead = x <= b * b
        idx = np.where(alive)[0]
        alive[idx[dead]] = False
        X[idx[~dead]] = x[~dead]
    payoff = np.zeros(paths)
    payoff[alive] = (b / np.sqrt(X[alive])) ** (2 * 0.5)
    m = payoff.mean()
    se_ = payoff.std(ddof=1) / sqrt(paths)
    return m, se_

m0, se0 = run(False)
print(f" uniform grid:  mean={m0:.6f} bias={m0-true_val:+.5f} se={se0:.5f}")
m1, se1 = run(True)
print(f" substepped:    mean={m1:.6f} bias={m1-true_val:+.5f} se={se1:.5f}")
print(f" true={true_val:.6f}")
