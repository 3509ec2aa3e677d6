//! Process-level quantities: the transition density of the Bessel process
//! and the negative-moment series E_a[(R_t)^{-2p}] with its two-sided
//! bounds.

use crate::error::{Error, Result};
use crate::params::BesselParams;
use crate::special::{bessel_i_scaled, ln_gamma, SeriesEval};

/// Transition density p_t(a, y) of the Bessel process with index ν ≥ 0:
/// (1/t) (y/a)^ν y e^{-(a²+y²)/2t} I_ν(ay/t).
///
/// Evaluated through the scaled I_ν so the Gaussian factor combines into
/// e^{-(a-y)²/2t} and no intermediate overflows for small t.
pub fn transition_density(params: &BesselParams, t: f64, y: f64) -> Result<f64> {
    let BesselParams { nu, a, .. } = *params;
    if nu < 0.0 {
        return Err(Error::domain(format!(
            "transition_density requires nu >= 0 (boundary behaviour at 0 is not specified \
             for nu < 0); got {nu}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("t must be > 0, got {t}")));
    }
    if !(y > 0.0) {
        return Err(Error::domain(format!("y must be > 0, got {y}")));
    }
    let z = a * y / t;
    let i_scaled = bessel_i_scaled(nu, z)?.value;
    // e^{-(a^2+y^2)/2t} I_nu(ay/t) = e^{-(a-y)^2/2t} [e^{-z} I_nu(z)]
    let gauss = (-(a - y) * (a - y) / (2.0 * t)).exp();
    Ok((y / a).powf(nu) * y / t * gauss * i_scaled)
}

/// Negative moment E_a[(R_t)^{-2p}] as the explicit series
/// (2t)^{-p} e^{-a²/2t} Σ_n a^{2n} Γ(n+ν+1-p) / (n! Γ(1+n+ν) (2t)^n).
///
/// Requires ν > -1 and 0 < p < 1+ν (the n=0 Gamma factor must stay off its
/// poles). All terms are positive; the truncation bound is a geometric
/// majorant of the dropped tail.
pub fn neg_moment(params: &BesselParams, p: f64, t: f64) -> Result<SeriesEval> {
    let BesselParams { nu, a, .. } = *params;
    if !(nu > -1.0) {
        return Err(Error::domain(format!("neg_moment requires nu > -1, got {nu}")));
    }
    if !(p > 0.0) {
        return Err(Error::domain(format!("neg_moment requires p > 0, got {p}")));
    }
    if !(p < 1.0 + nu) {
        return Err(Error::domain(format!(
            "neg_moment requires p < 1 + nu (Gamma pole at p = {}), got p = {p}",
            1.0 + nu
        )));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("t must be > 0, got {t}")));
    }
    // first term Γ(1+ν-p)/Γ(1+ν); successive ratio
    // r_n = a² (n+ν+1-p) / (2t (n+1) (1+n+ν)), eventually decreasing ~ a²/(2tn)
    let mut term = (ln_gamma(1.0 + nu - p)? - ln_gamma(1.0 + nu)?).exp();
    let mut sum = term;
    let mut n = 0u32;
    let a2 = a * a;
    loop {
        let nf = n as f64;
        let ratio = a2 * (nf + nu + 1.0 - p) / (2.0 * t * (nf + 1.0) * (1.0 + nf + nu));
        term *= ratio;
        sum += term;
        n += 1;
        if term < 1e-17 * sum && ratio < 1.0 {
            break;
        }
        if n > 100_000 {
            return Err(Error::Convergence("neg_moment series stalled".into()));
        }
    }
    let nf = n as f64;
    let next_ratio = a2 * (nf + nu + 1.0 - p) / (2.0 * t * (nf + 1.0) * (1.0 + nf + nu));
    let t_next = term * next_ratio;
    let remainder = t_next / (1.0 - next_ratio.min(0.5));
    let pref = (2.0 * t).powf(-p) * (-a2 / (2.0 * t)).exp();
    Ok(SeriesEval {
        value: pref * sum,
        terms_used: n + 1,
        trunc_bound: pref * remainder,
    })
}

/// Lower bound of the moment sandwich for t ≥ 1:
/// [Γ(1+ν-p)/Γ(1+ν)] (2t)^{-p} e^{-a²/2t}.
pub fn neg_moment_lower(params: &BesselParams, p: f64, t: f64) -> Result<f64> {
    let BesselParams { nu, a, .. } = *params;
    let lead = (ln_gamma(1.0 + nu - p)? - ln_gamma(1.0 + nu)?).exp();
    Ok(lead * (2.0 * t).powf(-p) * (-a * a / (2.0 * t)).exp())
}

/// Upper bound of the moment sandwich for t ≥ 1: leading term plus C t^{-1-p},
/// with C realized constructively as the n ≥ 1 part of the series at t = 1
/// (which dominates the n ≥ 1 part at any t ≥ 1).
pub fn neg_moment_upper(params: &BesselParams, p: f64, t: f64) -> Result<f64> {
    let BesselParams { nu, .. } = *params;
    let lead = (ln_gamma(1.0 + nu - p)? - ln_gamma(1.0 + nu)?).exp();
    let c = sandwich_constant(params, p)?;
    Ok(lead * (2.0 * t).powf(-p) + c * t.powf(-1.0 - p))
}

/// The constant C of the sandwich upper bound: 2^{-p} Σ_{n≥1} of the series
/// terms at t = 1.
pub fn sandwich_constant(params: &BesselParams, p: f64) -> Result<f64> {
    let BesselParams { nu, a, .. } = *params;
    let mut term = (ln_gamma(1.0 + nu - p)? - ln_gamma(1.0 + nu)?).exp();
    let a2 = a * a;
    let mut sum = 0.0;
    for n in 0..100_000u32 {
        let nf = n as f64;
        let ratio = a2 * (nf + nu + 1.0 - p) / (2.0 * (nf + 1.0) * (1.0 + nf + nu));
        term *= ratio;
        sum += term;
        if term < 1e-17 * sum.max(1e-300) && ratio < 1.0 {
            return Ok(2.0f64.powf(-p) * sum);
        }
    }
    Err(Error::Convergence("sandwich constant series stalled".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Adaptive Simpson quadrature: the independent oracle for density
    // integrals. Tolerance 1e-10 absolute on (0, a + 12 sqrt(t)); the
    // Gaussian factor bounds the dropped tail far below that.
    pub(crate) fn simpson<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> f64 {
        fn rec<F: Fn(f64) -> f64>(
            f: &F,
            lo: f64,
            hi: f64,
            flo: f64,
            fmid: f64,
            fhi: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let mid = 0.5 * (lo + hi);
            let lm = 0.5 * (lo + mid);
            let rm = 0.5 * (mid + hi);
            let flm = f(lm);
            let frm = f(rm);
            let left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            let right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            let delta = left + right - whole;
            if depth > 48 || delta.abs() < 15.0 * tol {
                return left + right + delta / 15.0;
            }
            rec(f, lo, mid, flo, flm, fmid, left, tol / 2.0, depth + 1)
                + rec(f, mid, hi, fmid, frm, fhi, right, tol / 2.0, depth + 1)
        }
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        rec(f, lo, hi, flo, fmid, fhi, whole, tol, 0)
    }

    fn quad_density<F: Fn(f64) -> f64>(params: &BesselParams, t: f64, weight: F) -> f64 {
        let hi = params.a + 12.0 * t.sqrt();
        let f = |y: f64| {
            if y <= 0.0 {
                0.0
            } else {
                weight(y) * transition_density(params, t, y).unwrap()
            }
        };
        simpson(&f, 1e-12, hi, 1e-10)
    }

    #[test]
    fn density_normalizes() {
        let p = BesselParams::new(1.0, 1.0, 0.5).unwrap();
        let total = quad_density(&p, 1.0, |_| 1.0);
        assert!((total - 1.0).abs() < 1e-8, "integral = {total}");
    }

    #[test]
    fn density_vanishes_at_origin_for_positive_nu() {
        let p = BesselParams::new(1.0, 1.0, 0.5).unwrap();
        assert!(transition_density(&p, 1.0, 1e-12).unwrap() < 1e-11);
    }

    #[test]
    fn squared_bessel_mean_identity() {
        // E[R_t^2] = a^2 + 2(nu+1) t, by quadrature oracle
        let p = BesselParams::new(1.0, 1.0, 0.5).unwrap();
        let m2 = quad_density(&p, 1.0, |y| y * y);
        assert!((m2 - 5.0).abs() < 1e-7, "E[R^2] = {m2}");
    }

    #[test]
    fn density_small_t_large_t_finite() {
        let p = BesselParams::new(0.5, 2.0, 1.0).unwrap();
        for &(t, y) in &[(1e-6, 2.0), (1e-6, 1.9), (1e4, 30.0)] {
            let v = transition_density(&p, t, y).unwrap();
            assert!(v.is_finite() && v >= 0.0);
        }
    }

    #[test]
    fn density_rejects_negative_nu() {
        let p = BesselParams::new(-0.3, 1.0, 0.5).unwrap();
        assert!(transition_density(&p, 1.0, 1.0).is_err());
    }

    #[test]
    fn neg_moment_zeroth_moment_limit() {
        // p -> 0+: series telescopes to e^{-a²/2t} Σ a^{2n}/(n! (2t)^n) = 1
        let p = BesselParams::new(0.7, 1.3, 0.5).unwrap();
        let m = neg_moment(&p, 1e-12, 2.0).unwrap();
        assert!((m.value - 1.0).abs() < 1e-9, "p->0 limit = {}", m.value);
    }

    #[test]
    fn neg_moment_against_quadrature() {
        // independent oracle: integral of y^{-2p} * transition density
        let p = BesselParams::new(1.0, 1.0, 0.5).unwrap();
        let m = neg_moment(&p, 1.0, 2.0).unwrap();
        let quad = quad_density(&p, 2.0, |y| y.powf(-2.0));
        assert!((m.value - quad).abs() < 1e-8, "{} vs {quad}", m.value);
        // closed form for this case: 1 - e^{-1/4}
        assert!((m.value - 0.22119921692859513).abs() < 1e-12);
    }

    #[test]
    fn neg_moment_paper_bracketing_case() {
        // nu=1/2, a=2, p=1/2, t=100: value sits between the sandwich bounds
        let p = BesselParams::new(0.5, 2.0, 1.0).unwrap();
        let m = neg_moment(&p, 0.5, 100.0).unwrap();
        assert!((m.value - 0.079259709439103023).abs() < 1e-13);
        let lo = neg_moment_lower(&p, 0.5, 100.0).unwrap();
        let hi = neg_moment_upper(&p, 0.5, 100.0).unwrap();
        assert!(lo <= m.value && m.value <= hi, "{lo} <= {} <= {hi}", m.value);
    }

    #[test]
    fn neg_moment_domain_errors() {
        let p = BesselParams::new(0.5, 1.0, 0.5).unwrap();
        assert!(neg_moment(&p, 0.0, 1.0).is_err());
        assert!(neg_moment(&p, -0.2, 1.0).is_err());
        assert!(neg_moment(&p, 1.5, 1.0).is_err()); // p >= 1 + nu
        assert!(neg_moment(&p, 0.5, 0.0).is_err());
    }

    #[test]
    fn neg_moment_trunc_bound_honest() {
        let p = BesselParams::new(0.5, 2.0, 1.0).unwrap();
        // tighter t makes the series longer; bound must stay rigorous
        for &t in &[0.3, 1.0, 10.0] {
            let m = neg_moment(&p, 0.4, t).unwrap();
            assert!(m.trunc_bound >= 0.0 && m.trunc_bound < 1e-12 * m.value);
            assert!(m.terms_used >= 1);
        }
    }

    #[test]
    fn leading_order_limit() {
        // (2t)^p * neg_moment -> Γ(1+ν-p)/Γ(1+ν) as t -> ∞
        let p = BesselParams::new(1.0, 1.0, 0.5).unwrap();
        let m = neg_moment(&p, 0.6, 1e6).unwrap();
        let lead = (ln_gamma(1.4).unwrap() - ln_gamma(2.0).unwrap()).exp();
        let got = (2e6_f64).powf(0.6) * m.value;
        assert!(((got - lead) / lead).abs() < 1e-4, "{got} vs {lead}");
    }
}
