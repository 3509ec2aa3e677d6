"""Round 2: validate the production architecture before writing Rust.
- Stehfest math error on pure powers lambda^p (p fractional) by order
- nu=1/2: CDF-route at small t vs direct tail route
- nu in {0.3,0.5,1.0,1.5,2.5}: full pipeline (split+subtract / direct) vs mp truth
  over t in [1e2,1e6]; predicted C1,C2,C3,C8 outcomes; ladder spreads
- nu=0 at t=e^10; 1/lam and 1/lam^2 f64 noise
"""
from fractions import Fraction
from math import factorial, log, sqrt, exp, erf, pi, sin, gamma as g_
import math
import mpmath as mp

mp.mp.dps = 50

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

W = {N: [float(v) for v in stehfest_weights_exact(N)] for N in (10, 12, 14, 16, 18, 20)}

def invert(psi, t, N):
    ln2t = log(2) / t
    s = 0.0; c = 0.0
    for k in range(1, N + 1):
        term = W[N][k - 1] * psi(k * ln2t)
        tmp = s + term
        c += (s - tmp) + term if abs(s) >= abs(term) else (term - tmp) + s
        s = tmp
    return (s + c) * ln2t

print("== Stehfest math error on pure powers lambda^p (truth t^{-p-1}/Gamma(-p)) ==")
for p in (-0.7, -0.5, 0.5, 1.5, 2.0):
    t = 7.3  # arbitrary
    if abs(round(-p) + p) < 1e-9:
        continue
    true = t ** (-p - 1) / g_(-p)
    line = f" p={p:+.1f}:"
    for N in (12, 14, 16, 18, 20):
        v = invert(lambda lam: lam ** p, t, N)
        line += f" N{N}={abs(v-true)/abs(true):.1e}"
    print(line)

print("\n== f64 noise on 1/lam and 1/lam^2 (several t) ==")
for N in (12, 14, 20):
    worst1 = max(abs(invert(lambda l: 1/l, t, N) - 1.0) for t in (0.37, 1.0, 7.3, 123.0))
    worst2 = max(abs(invert(lambda l: 1/l**2, t, N) - t)/t for t in (0.37, 1.0, 7.3, 123.0))
    print(f" N={N}: max|inv(1/lam)-1|={worst1:.1e}  max rel|inv(1/lam^2)-t|={worst2:.1e}")

# ---------------------------------------------------------------------------
# Production pipeline (f64 emulation)
def recip_gamma(x):
    # 1/Gamma(x) for any real x
    if x > 0:
        return 1.0 / g_(x)
    return sin(pi * x) / pi * g_(1.0 - x)

def G_series(mu, w):
    tot = 0.0; term_k = 1.0
    for k in range(0, 80):
        c = recip_gamma(k + 1 + mu)
        tot += term_k * c
        term_k *= w / (k + 1)
        if term_k * max(abs(c), 1.0) < 1e-18 * max(abs(tot), 1e-300) and k > 3:
            break
    return tot

class SplitEval:
    """Singular evaluand with leading-term subtraction, nu>0 noninteger."""
    def __init__(self, nu, a, b):
        self.nu, self.a, self.b = nu, a, b
        self.hp = (b / a) ** (2 * nu)
        self.C = pi / (2 * sin(pi * nu))
        # R(0) and the analytic leading constant
        self.R0 = self.hp * 2 ** (-2 * nu) * (a ** (2 * nu) - b ** (2 * nu)) \
            * g_(1 - nu) / g_(1 + nu) if nu < 1 else \
            self.hp * 2 ** (-2 * nu) * (a ** (2 * nu) - b ** (2 * nu)) \
            * (recip_gamma(1 + nu) / recip_gamma(1 - nu))
        # lead coefficient of tail: R0*2^nu/Gamma(1-nu) * t^-nu
        self.lead = self.R0 * 2 ** self.nu * recip_gamma(1 - nu)

    def R(self, lam):
        nu, a, b, C = self.nu, self.a, self.b, self.C
        wa = lam * a * a / 2; wb = lam * b * b / 2
        n0 = 0.0
        pk = 1.0  # (lam/2)^k /k!
        for k in range(1, 80):
            pk *= lam / 2 / k
            term = pk * (b ** (2 * k) - a ** (2 * k)) * recip_gamma(k + 1 - nu)
            n0 += term
            if abs(term) < 1e-18 * max(abs(n0), 1e-300) and k > 3:
                break
        n0 *= C * 2 ** nu
        x = (2 * lam) ** nu
        n1 = -C * 2 ** (-nu) * (b ** (2 * nu) * G_series(nu, wb)
                                - a ** (2 * nu) * G_series(nu, wa))
        d0 = C * 2 ** nu * G_series(-nu, wb)
        d1 = -C * 2 ** (-nu) * b ** (2 * nu) * G_series(nu, wb)
        return self.hp * (n1 * d0 - n0 * d1) / (d0 * (d0 + x * d1))

    def remainder(self, lam):
        return 2 ** self.nu * lam ** (self.nu - 1.0) * (self.R(lam) - self.R0)

    def tail(self, t, N):
        return self.lead * t ** (-self.nu) + invert(self.remainder, t, N)

def phi_f64(nu, a, b, lam):
    s = mp.sqrt(2 * lam)
    return float((mp.mpf(b) / a) ** nu * mp.besselk(nu, a * s) / mp.besselk(nu, b * s))

def tail_direct(nu, a, b, t, N):
    hp = (b / a) ** (2 * nu) if nu > 0 else 1.0
    return invert(lambda lam: (hp - phi_f64(nu, a, b, lam)) / lam, t, N)

def cdf_route_tail(nu, a, b, t, N):
    hp = (b / a) ** (2 * nu) if nu > 0 else 1.0
    F = invert(lambda lam: phi_f64(nu, a, b, lam) / lam, t, N)
    return hp - F

def true_tail(nu, a, b, t):
    hp = (mp.mpf(b) / a) ** (2 * nu) if nu > 0 else mp.mpf(1)
    def f(lam):
        s = mp.sqrt(2 * lam)
        ph = (mp.mpf(b) / a) ** nu * mp.besselk(nu, a * s) / mp.besselk(nu, b * s)
        return (hp - ph) / lam
    return float(mp.invertlaplace(f, t, method='talbot', degree=80))

print("\n== C1: nu=1/2 five-point, direct vs cdf-route (order 14 / ladder 12) ==")
for t in (0.1, 1.0, 10.0, 100.0, 1000.0):
    true = 0.5 * erf(1.0 / sqrt(2 * t))
    d14 = tail_direct(0.5, 2, 1, t, 14)
    c14 = cdf_route_tail(0.5, 2, 1, t, 14)
    F14 = 0.5 - c14
    choose = "cdf" if F14 < 0.45 * 0.5 else "dir"
    pick = c14 if choose == "cdf" else d14
    print(f" t={t:8g} dir={abs(d14-true)/true:.2e} cdf={abs(c14-true)/true:.2e} "
          f"choose={choose} pick_rel={abs(pick-true)/true:.2e}")

print("\n== General nu pipeline vs truth; t grid for C2/C3/C8 ==")
import numpy as np
for nu in (0.3, 0.5, 1.0, 1.5, 2.5):
    a, b = 2.0, 1.0
    tgrid = [10 ** e for e in np.linspace(2, 5, 13)]
    diffs = []
    print(f" nu={nu}:")
    for t in (1e2, 1e3, 1e4, 1e5, 1e6):
        tru = true_tail(nu, a, b, t)
        if abs(nu - round(nu)) > 0.049:
            se = SplitEval(nu, a, b)
            v14 = se.tail(t, 14); v12 = se.tail(t, 12)
        else:
            v14 = tail_direct(nu, a, b, t, 14); v12 = tail_direct(nu, a, b, t, 12)
        rel = (v14 - tru) / tru
        lad = abs(v14 - v12) / max(abs(v14), 1e-300)
        norm = (2 * t) ** nu * g_(1 + nu) * v14
        target = b ** (2 * nu) * (1 - (b / a) ** (2 * nu))
        print(f"   t={t:8.0e} true={tru:.6e} rel={rel:+.1e} ladder={lad:.1e} "
              f"normdev={(norm-target)/target:+.3%}")
    # C3 slope fit of |tail - asym|
    pts = []
    for t in tgrid:
        if abs(nu - round(nu)) > 0.049:
            v = SplitEval(nu, a, b).tail(t, 14)
        else:
            v = tail_direct(nu, a, b, t, 14)
        asym = (1 - (b / a) ** (2 * nu)) * b ** (2 * nu) / (g_(1 + nu) * (2 * t) ** nu)
        d = abs(v - asym)
        if d > 0:
            pts.append((log(t), log(d)))
    n = len(pts)
    sx = sum(p[0] for p in pts); sy = sum(p[1] for p in pts)
    sxx = sum(p[0] ** 2 for p in pts); sxy = sum(p[0] * p[1] for p in pts)
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    print(f"   C3 slope of |tail-asym| on [1e2,1e5]: {slope:.3f} "
          f"(required <= {-nu - 0.05:.2f}) {'PASS' if slope <= -nu - 0.05 else 'FAIL'}")

print("\n== nu=0: t=e^10, a=e*b ==")
t0 = float(mp.e ** 10)
tru = true_tail(0.0, math.e, 1.0, t0)
v = tail_direct(0.0, math.e, 1.0, t0, 14)
print(f" true={tru:.6e} inv={v:.6e} vs 2/log t=0.2 dev={(v-0.2)/0.2:+.2%}")

print("\n== C8: nu=1 boundedness t in [1,1e6] ==")
vals = []
for t in (1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6):
    v = tail_direct(1.0, 2, 1, t, 14)
    vals.append(t ** 1.0 * v)
    print(f"  t={t:8.0e} t^nu*tail={vals[-1]:.6f}")
print(f"  ratio max/min = {max(vals)/min(vals):.3f} (need < 2)")
