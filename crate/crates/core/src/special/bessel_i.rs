//! Modified Bessel function of the first kind, real order ν ≥ 0.

use super::{ln_gamma, SeriesEval};
use crate::error::{Error, Result};

/// Default argument where evaluation switches from the ascending power
/// series to the large-argument asymptotic expansion. Both regimes agree to
/// better than 1e-10 relative in a neighbourhood of this value (tested).
pub const DEFAULT_I_CROSSOVER: f64 = 30.0;

/// I_ν(z) for ν ≥ 0, z > 0, with the default series/asymptotic crossover.
pub fn bessel_i(nu: f64, z: f64) -> Result<SeriesEval> {
    bessel_i_with_crossover(nu, z, DEFAULT_I_CROSSOVER)
}

/// e^{-z} I_ν(z); safe for large z where I_ν itself overflows.
pub fn bessel_i_scaled(nu: f64, z: f64) -> Result<SeriesEval> {
    check_args(nu, z)?;
    if z <= DEFAULT_I_CROSSOVER {
        let mut r = i_series(nu, z)?;
        let s = (-z).exp();
        r.value *= s;
        r.trunc_bound *= s;
        Ok(r)
    } else {
        i_asymptotic(nu, z, true)
    }
}

/// I_ν(z) with an explicit crossover (exposed so the regime overlap can be
/// probed; use [`bessel_i`] otherwise).
pub fn bessel_i_with_crossover(nu: f64, z: f64, crossover: f64) -> Result<SeriesEval> {
    check_args(nu, z)?;
    if z <= crossover {
        i_series(nu, z)
    } else {
        i_asymptotic(nu, z, false)
    }
}

fn check_args(nu: f64, z: f64) -> Result<()> {
    if !(nu >= 0.0) {
        return Err(Error::domain(format!(
            "bessel_i requires nu >= 0, got {nu} (use I_-nu = I_nu + (2/pi) sin(nu pi) K_nu)"
        )));
    }
    if !(z > 0.0) {
        return Err(Error::domain(format!("bessel_i requires z > 0, got {z}")));
    }
    Ok(())
}

// Ascending series (z/2)^nu sum_n (z^2/4)^n / (n! Γ(1+nu+n)). All terms are
// positive, so the partial sum is a lower bound and the dropped tail is
// dominated by a geometric majorant.
fn i_series(nu: f64, z: f64) -> Result<SeriesEval> {
    let q = z * z / 4.0;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut n = 0u32;
    loop {
        let nf = n as f64 + 1.0;
        term *= q / (nf * (nu + nf));
        sum += term;
        n += 1;
        if term < 1e-17 * sum {
            break;
        }
        if n > 10_000 {
            return Err(Error::Convergence("bessel_i series stalled".into()));
        }
    }
    // next term and a geometric bound on everything after it
    let nf = n as f64 + 1.0;
    let t_next = term * q / (nf * (nu + nf));
    let ratio = q / ((nf + 1.0) * (nu + nf + 1.0));
    let remainder = t_next / (1.0 - ratio.min(0.5));
    // prefactor (z/2)^nu / Γ(1+nu) in log space to dodge overflow
    let lp = nu * (z / 2.0).ln() - ln_gamma(1.0 + nu)?;
    if lp > 700.0 {
        return Err(Error::Overflow(format!("bessel_i({nu}, {z}) overflows f64")));
    }
    let pref = lp.exp();
    Ok(SeriesEval {
        value: pref * sum,
        terms_used: n + 1,
        trunc_bound: pref * remainder,
    })
}

// Large-argument expansion I_nu(z) ~ e^z/sqrt(2 pi z) sum_k (-1)^k a_k(nu)/z^k.
// Truncated at the smallest term; the first omitted term bounds the error.
fn i_asymptotic(nu: f64, z: f64, scaled: bool) -> Result<SeriesEval> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 0u32;
    loop {
        let kf = k as f64 + 1.0;
        let next = term * -(mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * z * kf);
        if next.abs() >= term.abs() && k > 0 {
            break; // asymptotic divergence sets in
        }
        term = next;
        sum += term;
        k += 1;
        if term.abs() < 1e-17 * sum.abs() || k > 200 {
            break;
        }
    }
    let kf = k as f64 + 1.0;
    let omitted = (term * (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * z * kf)).abs();
    let pref = if scaled {
        1.0 / (2.0 * std::f64::consts::PI * z).sqrt()
    } else {
        if z > 709.0 {
            return Err(Error::Overflow(format!(
                "bessel_i({nu}, {z}) overflows f64; use bessel_i_scaled"
            )));
        }
        z.exp() / (2.0 * std::f64::consts::PI * z).sqrt()
    };
    Ok(SeriesEval {
        value: pref * sum,
        terms_used: k + 1,
        trunc_bound: pref * omitted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_z_limit() {
        // only the n=0 term survives: I_0(z) -> 1 as z -> 0+
        let r = bessel_i(0.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_integer_closed_form() {
        // independent oracle: I_{1/2}(z) = sqrt(2/(pi z)) sinh z
        for &z in &[0.3, 1.0, 2.7, 9.0] {
            let want = (2.0 / (std::f64::consts::PI * z)).sqrt() * z.sinh();
            let got = bessel_i(0.5, z).unwrap();
            assert!(
                (got.value - want).abs() < 1e-12 * want,
                "z={z}: {} vs {want}",
                got.value
            );
        }
        // I_{1/2}(1) frozen from the closed form
        let r = bessel_i(0.5, 1.0).unwrap();
        assert!((r.value - 0.93767488824548764).abs() < 1e-13);
    }

    #[test]
    fn trunc_bound_is_rigorous_and_small() {
        for &(nu, z) in &[(0.0, 1.0), (1.0, 2.0), (2.5, 7.0), (0.5, 25.0)] {
            let r = bessel_i(nu, z).unwrap();
            assert!(r.trunc_bound >= 0.0);
            assert!(r.trunc_bound <= 1e-12 * r.value, "loose bound at ({nu},{z})");
            assert!(r.terms_used >= 1);
        }
    }

    #[test]
    fn regime_overlap_near_crossover() {
        // series and asymptotic must agree around z = 30 to 1e-10 relative
        for &z in &[26.0, 30.0, 34.0] {
            for &nu in &[0.0, 0.5, 1.0, 2.2, 3.0] {
                let ser = bessel_i_with_crossover(nu, z, 1e9).unwrap().value;
                let asy = bessel_i_with_crossover(nu, z, 1.0).unwrap().value;
                assert!(
                    ((ser - asy) / ser).abs() < 1e-10,
                    "nu={nu} z={z}: {ser} vs {asy}"
                );
            }
        }
    }

    #[test]
    fn scaled_matches_unscaled() {
        for &(nu, z) in &[(0.7, 3.0), (1.5, 40.0)] {
            let su = bessel_i(nu, z).unwrap().value * (-z).exp();
            let sc = bessel_i_scaled(nu, z).unwrap().value;
            assert!(((su - sc) / sc).abs() < 1e-12);
        }
        // huge argument must not overflow in scaled form
        let r = bessel_i_scaled(1.0, 5000.0).unwrap();
        assert!(r.value.is_finite() && r.value > 0.0);
    }

    #[test]
    fn mpmath_anchors() {
        // reference values computed with mpmath 1.3
        let cases = [
            (1.0, 2.0, 1.5906368546373291),
            (2.5, 7.0, 104.61336757234871),
            (0.0, 30.0, 781672297823.9775),
            (1.7, 45.0, 2016846605337917475.8),
        ];
        for &(nu, z, want) in &cases {
            let got = bessel_i(nu, z).unwrap().value;
            assert!(
                ((got - want) / want).abs() < 1e-11,
                "I_{nu}({z}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_i(-0.5, 1.0).is_err());
        assert!(bessel_i(1.0, 0.0).is_err());
        assert!(bessel_i(1.0, -2.0).is_err());
    }
}
