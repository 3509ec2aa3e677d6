"""Calibration: exact Gaver-Stehfest weights, moment sums, and an end-to-end
rehearsal of the nu=1/2 hitting-tail inversion in f64-like arithmetic."""
from fractions import Fraction
from math import factorial, log, sqrt, exp, erf, pi
import mpmath as mp

def stehfest_weights_exact(N):
    assert N % 2 == 0
    M = N // 2
    V = []
    for k in range(1, N + 1):
        s = Fraction(0)
        for j in range((k + 1) // 2, min(k, M) + 1):
            num = Fraction(j ** M) * factorial(2 * j)
            den = (factorial(M - j) * factorial(j) * factorial(j - 1)
                   * factorial(k - j) * factorial(2 * j - k))
            s += num / den
        sign = -1 if (M + k) % 2 else 1
        V.append(sign * s)
    return V

for N in (4, 8, 10, 12, 14, 16, 18, 20):
    V = stehfest_weights_exact(N)
    Vf = [float(v) for v in V]
    sum_abs = sum(abs(v) for v in Vf)
    sum_abs_over_k = sum(abs(v) / (k + 1) for k, v in enumerate(Vf))
    # exact signed moment sums
    s_over_k = sum(v / Fraction(k + 1) for k, v in enumerate(V))
    s_over_k2 = float(sum(v / Fraction((k + 1) ** 2) for k, v in enumerate(V)))
    moms = []
    for m in range(0, 8):
        sm = sum(v * Fraction((k + 1) ** m) for k, v in enumerate(V))
        moms.append(float(sm))
    print(f"N={N:2d} max|V|={max(abs(v) for v in Vf):.3e} Sum|V|={sum_abs:.3e} "
          f"Sum|V|/k={sum_abs_over_k:.3e}")
    print(f"   SumV/k={float(s_over_k)!r} (exact==1: {s_over_k == 1}) "
          f"SumV/k^2={s_over_k2!r} vs ln2={log(2)!r} diff={s_over_k2 - log(2):.3e}")
    print(f"   signed moments m=0..7: {['%.3e' % m for m in moms]}")

# ---------------------------------------------------------------------------
# End-to-end rehearsal in double precision: nu=1/2, a=2, b=1.
# Exact transform phi(lam) = 0.5*exp(-sqrt(2 lam)); hitprob = 0.5.
# True tail(t) = 0.5*erf(1/sqrt(2 t)).
def weights_f64(N):
    return [float(v) for v in stehfest_weights_exact(N)]

W = {N: weights_f64(N) for N in (10, 12, 14, 16)}

def invert(psi, t, N):
    ln2t = log(2) / t
    # Neumaier compensated sum
    s = 0.0; c = 0.0
    for k in range(1, N + 1):
        term = W[N][k - 1] * psi(k * ln2t)
        tmp = s + term
        if abs(s) >= abs(term):
            c += (s - tmp) + term
        else:
            c += (term - tmp) + s
        s = tmp
    return (s + c) * ln2t

def psi_direct(lam):
    return (0.5 - 0.5 * exp(-sqrt(2 * lam))) / lam

def psi_sing(lam):
    # singular (odd in sqrt) part only: 0.5*sinh(sqrt(2 lam))... careful:
    # 1-exp(-x) = (1-cosh x) + sinh x ; singular part = sinh x
    import math
    x = sqrt(2 * lam)
    return 0.5 * math.sinh(x) / lam  # diverges for big x; only small-lam use

print("\nC1 rehearsal nu=1/2 a=2 b=1; true tail=0.5*erf(1/sqrt(2t))")
for t in (0.1, 1.0, 10.0, 100.0, 1000.0):
    true = 0.5 * erf(1.0 / sqrt(2 * t))
    v14 = invert(psi_direct, t, 14)
    v12 = invert(psi_direct, t, 12)
    print(f" t={t:8g} true={true:.10e} dir14 rel={(v14-true)/true:+.2e} "
          f"dir12 rel={(v12-true)/true:+.2e} ladder={abs(v14-v12)/abs(v14):.1e}")
    # split evaluand valid when largest x small enough
    xmax = sqrt(2 * 14 * log(2) / t) * 2  # a*s_max
    if xmax < 6:
        s14 = invert(psi_sing, t, 14)
        s12 = invert(psi_sing, t, 12)
        print(f"            split14 rel={(s14-true)/true:+.2e} "
              f"split12 rel={(s12-true)/true:+.2e}")

# ---------------------------------------------------------------------------
# General-nu check with mpmath besselk in f64-emulated pipeline vs mp truth.
mp.mp.dps = 40

def phi_mp(nu, aa, bb, lam):
    s = mp.sqrt(2 * lam)
    return (mp.mpf(bb) / aa) ** nu * mp.besselk(nu, aa * s) / mp.besselk(nu, bb * s)

def true_tail(nu, aa, bb, t):
    # invert (hitprob - phi)/lam with mpmath talbot at high precision
    hp = (mp.mpf(bb) / aa) ** (2 * nu)
    f = lambda lam: (hp - phi_mp(nu, aa, bb, lam)) / lam
    return mp.invertlaplace(f, t, method='talbot', degree=60)

# f64 pipeline with the split evaluand, general nu (noninteger):
def G(mu, w, terms=60):
    # sum_k w^k /(k! * Gamma(k+1+mu)) in float
    tot = 0.0
    for k in range(terms):
        tot += w ** k / (factorial(k) * float(mp.gamma(k + 1 + mu)))
    return tot

def psi_split_f64(nu, aa, bb, lam):
    import math
    hp = (bb / aa) ** (2 * nu)
    C = pi / (2 * math.sin(pi * nu))
    wa = lam * aa * aa / 2; wb = lam * bb * bb / 2
    # n0 = C*2^nu*(G_{-nu}(wb)-G_{-nu}(wa)) via k>=1 terms
    n0 = 0.0
    for k in range(1, 60):
        n0 += (lam / 2) ** k * (bb ** (2 * k) - aa ** (2 * k)) / (
            factorial(k) * float(mp.gamma(k + 1 - nu)))
    n0 *= C * 2 ** nu
    x = (2 * lam) ** nu
    n1 = -C * 2 ** (-nu) * (bb ** (2 * nu) * G(nu, wb) - aa ** (2 * nu) * G(nu, wa))
    d0 = C * 2 ** nu * G(-nu, wb)
    d1 = -C * 2 ** (-nu) * bb ** (2 * nu) * G(nu, wb)
    return hp * x * (n1 * d0 - n0 * d1) / (lam * d0 * (d0 + x * d1))

def psi_direct_f64(nu, aa, bb, lam):
    hp = (bb / aa) ** (2 * nu)
    s = mp.sqrt(2 * lam)
    ph = float((mp.mpf(bb) / aa) ** nu * mp.besselk(nu, aa * s) / mp.besselk(nu, bb * s))
    return (hp - ph) / lam

print("\nGeneral-nu spot checks (split evaluand in ~f64):")
for nu, t in ((2.5, 1e4), (2.5, 1e5), (1.5, 1e4), (0.3, 1e4), (0.5, 1e4)):
    tru = true_tail(mp.mpf(nu), 2, 1, mp.mpf(t))
    v14 = invert(lambda lam: psi_split_f64(nu, 2, 1, lam), t, 14)
    v12 = invert(lambda lam: psi_split_f64(nu, 2, 1, lam), t, 12)
    relerr = (v14 - float(tru)) / float(tru)
    # theorem-1 constant check
    gam = float(mp.gamma(1 + nu))
    norm = (2 * t) ** nu * gam * v14
    target = 1.0 * (1 - (1 / 2) ** (2 * nu))
    print(f" nu={nu} t={t:g} true={float(tru):.6e} f64rel={relerr:+.2e} "
          f"ladder={abs(v14-v12)/abs(v14):.1e} norm={norm:.4f} target={target:.4f} "
          f"normdev={(norm-target)/target:+.2%}")

# identity check: psi_direct - psi_split should be analytic-smooth; verify the
# split formula reproduces the singular content: compare high-precision.
print("\nsplit-vs-direct identity (difference should be analytic in lam):")
for lam in (1e-4, 1e-3, 1e-2):
    d = psi_direct_f64(2.5, 2, 1, lam) - psi_split_f64(2.5, 2, 1, lam)
    print(f" lam={lam:g} analytic-part={d:.10e}")
