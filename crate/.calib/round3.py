"""Round 3: (a) order 16/18 at small t for C1; (b) split evaluand with
second-order subtraction (T2 lambda^nu term, T3 lambda^{2nu-1} term);
(c) resulting ladder spreads and C2 outcome."""
from fractions import Fraction
from math import factorial, log, sqrt, exp, erf, pi, sin, gamma as g_
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

W = {N: [float(v) for v in stehfest_weights_exact(N)] for N in (12, 14, 16, 18)}

def invert(psi, t, N):
    ln2t = log(2) / t
    s = 0.0; c = 0.0
    for k in range(1, N + 1):
        term = W[N][k - 1] * psi(k * ln2t)
        tmp = s + term
        c += (s - tmp) + term if abs(s) >= abs(term) else (term - tmp) + s
        s = tmp
    return (s + c) * ln2t

print("== C1 nu=1/2 direct at orders 14,16,18 ==")
def psi_half(lam):
    return (0.5 - 0.5 * exp(-sqrt(2 * lam))) / lam
for t in (0.1, 1.0, 10.0, 100.0, 1000.0):
    true = 0.5 * erf(1.0 / sqrt(2 * t))
    rels = {N: (invert(psi_half, t, N) - true) / true for N in (14, 16, 18)}
    print(f" t={t:8g} N14={rels[14]:+.2e} N16={rels[16]:+.2e} N18={rels[18]:+.2e}")

def recip_gamma(x):
    if x > 0:
        return 1.0 / g_(x)
    return sin(pi * x) / pi * g_(1.0 - x)

class Split2:
    """Split evaluand with T1 (lead), T2 (lambda^nu), T3 (lambda^{2nu-1})
    subtracted analytically. Series built with Taylor coeffs at lam=0."""
    def __init__(self, nu, a, b):
        self.nu, self.a, self.b = nu, a, b
        self.hp = (b / a) ** (2 * nu)
        C = pi / (2 * sin(pi * nu))
        self.C = C
        # Taylor coeffs (at lam=0) of the four analytic series
        # n0(lam) = C 2^nu sum_{k>=1} (lam/2)^k (b^2k - a^2k) rg(k+1-nu)/k!
        self.n0_c1 = C * 2 ** nu * 0.5 * (b * b - a * a) * recip_gamma(2 - nu)
        self.n0_c2 = C * 2 ** nu * 0.125 * (b ** 4 - a ** 4) * recip_gamma(3 - nu)
        # n1(lam) = -C 2^-nu [b^2nu G_nu(wb) - a^2nu G_nu(wa)], w = lam c^2/2
        self.n1_c0 = -C * 2 ** (-nu) * (b ** (2 * nu) - a ** (2 * nu)) * recip_gamma(1 + nu)
        self.n1_c1 = -C * 2 ** (-nu) * 0.5 * (b ** (2 * nu + 2) - a ** (2 * nu + 2)) \
            * recip_gamma(2 + nu)
        # d0 = C 2^nu G_{-nu}(wb); d1 = -C 2^-nu b^2nu G_nu(wb)
        self.d0_c0 = C * 2 ** nu * recip_gamma(1 - nu)
        self.d0_c1 = C * 2 ** nu * (b * b / 2) * recip_gamma(2 - nu)
        self.d1_c0 = -C * 2 ** (-nu) * b ** (2 * nu) * recip_gamma(1 + nu)
        # R_an(0), R_an'(0), q0 = d1(0)/d0(0)
        Ran0 = self.hp * self.n1_c0 / self.d0_c0  # n0(0)=0
        # R_an = hp (n1 d0 - n0 d1)/d0^2 ; derivative at 0:
        num_p = self.n1_c1 * self.d0_c0 + self.n1_c0 * self.d0_c1 \
            - self.n0_c1 * self.d1_c0
        Ran_p0 = self.hp * (num_p * self.d0_c0 - 2 * self.n1_c0 * self.d0_c1) \
            / self.d0_c0 ** 2
        # careful: d/dlam [N/d0^2] = N'/d0^2 - 2 N d0'/d0^3 ; N(0)=n1_c0*d0_c0
        Ran_p0 = self.hp * (num_p / self.d0_c0 ** 2
                            - 2 * self.n1_c0 * self.d0_c0 * self.d0_c1 / self.d0_c0 ** 3)
        self.Ran0 = Ran0
        self.Ran_p0 = Ran_p0
        self.q0 = self.d1_c0 / self.d0_c0
        # analytic inverse-transform coefficients
        self.L1 = 2 ** nu * Ran0 * recip_gamma(1 - nu)          # * t^-nu
        self.L2 = 2 ** nu * Ran_p0 * recip_gamma(-nu)           # * t^-nu-1
        self.L3 = -2 ** (2 * nu) * Ran0 * self.q0 * recip_gamma(1 - 2 * nu)  # * t^-2nu

    def G(self, mu, w):
        tot = 0.0; term_k = 1.0
        for k in range(0, 120):
            c = recip_gamma(k + 1 + mu)
            tot += term_k * c
            term_k *= w / (k + 1)
            if abs(term_k) * max(abs(c), 1.0) < 1e-18 * max(abs(tot), 1e-300) and k > 3:
                break
        return tot

    def parts(self, lam):
        nu, a, b, C = self.nu, self.a, self.b, self.C
        wa = lam * a * a / 2; wb = lam * b * b / 2
        n0 = 0.0; pk = 1.0
        for k in range(1, 120):
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
        return n0, n1, d0, d1

    def remainder(self, lam):
        nu = self.nu
        n0, n1, d0, d1 = self.parts(lam)
        x = (2 * lam) ** nu
        R = self.hp * (n1 * d0 - n0 * d1) / (d0 * (d0 + x * d1))
        rem = R - self.Ran0 - self.Ran_p0 * lam + self.Ran0 * self.q0 * x
        return 2 ** nu * lam ** (nu - 1.0) * rem

    def tail(self, t, N):
        lead = self.L1 * t ** (-self.nu) + self.L2 * t ** (-self.nu - 1.0) \
            + self.L3 * t ** (-2.0 * self.nu)
        return lead + invert(self.remainder, t, N)

def true_tail(nu, a, b, t):
    hp = (mp.mpf(b) / a) ** (2 * nu) if nu > 0 else mp.mpf(1)
    def f(lam):
        s = mp.sqrt(2 * lam)
        ph = (mp.mpf(b) / a) ** nu * mp.besselk(nu, a * s) / mp.besselk(nu, b * s)
        return (hp - ph) / lam
    return float(mp.invertlaplace(f, t, method='talbot', degree=80))

print("\n== Split2 (T1+T2+T3 subtracted); rel err and ladder ==")
for nu in (0.3, 0.5, 1.5, 2.5):
    se = Split2(nu, 2.0, 1.0)
    # sanity: L1 equals Thm1 constant
    thm1 = (1 - 0.5 ** (2 * nu)) * 1.0 / g_(1 + nu) / 2 ** nu
    print(f" nu={nu}: L1={se.L1:.12e} vs Thm1 t-coef={thm1:.12e} "
          f"L2={se.L2:+.4e} L3={se.L3:+.4e}")
    for t in (1e2, 1e3, 1e4, 1e5, 1e6):
        tru = true_tail(nu, 2, 1, t)
        v14 = se.tail(t, 14); v12 = se.tail(t, 12)
        lad = abs(v14 - v12) / max(abs(v14), 1e-300)
        norm = (2 * t) ** nu * g_(1 + nu) * v14
        target = 1 - 0.5 ** (2 * nu)
        print(f"   t={t:8.0e} rel={(v14-tru)/tru:+.1e} ladder={lad:.1e} "
              f"normdev={(norm/target-1):+.3%}")
