//! Real-argument special functions: Γ, ln Γ, 1/Γ, erf, and the modified
//! Bessel functions I_ν and K_ν.
//!
//! Everything here is pure and thread-safe. Accuracy targets: Γ to 1e-13
//! relative on [1e-3, 170], K_ν to better than 1e-10 relative, erf to 1e-14
//! absolute. The Bessel evaluations follow the usual scheme: power series /
//! Temme series at small argument, asymptotic expansion / Steed continued
//! fraction at large argument.

mod bessel_i;
mod bessel_k;

pub use bessel_i::{bessel_i, bessel_i_scaled, bessel_i_with_crossover, DEFAULT_I_CROSSOVER};
pub use bessel_k::{bessel_k, bessel_k_scaled};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A series-evaluated quantity together with a rigorous truncation bound.
///
/// For positive-term series the summed `value` is a lower bound of the true
/// sum and `trunc_bound` dominates the dropped remainder (geometric-tail
/// majorant).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesEval {
    pub value: f64,
    pub terms_used: u32,
    pub trunc_bound: f64,
}

/// Largest x with Γ(x) representable in f64.
pub const GAMMA_OVERFLOW_X: f64 = 171.624;

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients);
// Γ(x) = sqrt(2π) (ser(x)/x) t^{x+1/2} e^{-t} with t = x + g + 1/2.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];
const SQRT_2PI: f64 = 2.5066282746310002;

fn lanczos_series(x: f64) -> f64 {
    let mut ser = LANCZOS_COEFFS[0];
    for (j, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        ser += c / (x + j as f64);
    }
    ser
}

/// Γ(x) for x > 0.
///
/// Relative error below 1e-13 on [1e-3, 170]; arguments past the
/// representable range return `Error::Overflow`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("gamma requires x > 0, got {x}")));
    }
    if x > GAMMA_OVERFLOW_X {
        return Err(Error::Overflow(format!(
            "gamma({x}) exceeds the f64 range (x > {GAMMA_OVERFLOW_X})"
        )));
    }
    if x < 0.5 {
        // recurrence Γ(x) = Γ(x+1)/x keeps the Lanczos argument in range
        return Ok(lanczos_gamma(x + 1.0) / x);
    }
    Ok(lanczos_gamma(x))
}

// Γ(x) for x >= 0.5 via Lanczos, with the power split in two so the partial
// powers stay in range and the exponent rounding stays small.
fn lanczos_gamma(x: f64) -> f64 {
    let t = x + LANCZOS_G + 0.5;
    let half_pow = t.powf(0.5 * (x + 0.5));
    SQRT_2PI * (lanczos_series(x) / x) * half_pow * (-t).exp() * half_pow
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let t = x + LANCZOS_G + 0.5;
    Ok((x + 0.5) * t.ln() - t + (SQRT_2PI * lanczos_series(x) / x).ln())
}

/// sin(πx) computed through the nearest integer, accurate near the zeros.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let r = x - n;
    let s = (std::f64::consts::PI * r).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// 1/Γ(x) for any real x (entire function; zero at the poles of Γ).
pub fn recip_gamma(x: f64) -> f64 {
    if x > 0.0 {
        if x > GAMMA_OVERFLOW_X {
            return 0.0;
        }
        1.0 / lanczos_gamma_any_pos(x)
    } else {
        // reflection: 1/Γ(x) = sin(πx) Γ(1-x) / π
        if 1.0 - x > GAMMA_OVERFLOW_X {
            return f64::INFINITY * sin_pi(x).signum();
        }
        sin_pi(x) * lanczos_gamma_any_pos(1.0 - x) / std::f64::consts::PI
    }
}

fn lanczos_gamma_any_pos(x: f64) -> f64 {
    if x < 0.5 {
        lanczos_gamma(x + 1.0) / x
    } else {
        lanczos_gamma(x)
    }
}

/// erf(x) to 1e-14 absolute accuracy; odd in x.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x >= 6.0 {
        return 1.0; // erfc(6) < 3e-17
    }
    if x <= 1.0 {
        erf_series(x)
    } else {
        1.0 - erfc_cf(x)
    }
}

// Maclaurin series, converges fast for |x| <= 1.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        let nf = n as f64;
        term *= -x2 / nf;
        let contrib = term / (2.0 * nf + 1.0);
        sum += contrib;
        if contrib.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

// Continued fraction for erfc, modified Lentz, x > 1:
// erfc(x) sqrt(pi) e^{x^2} = 1/(x+ (1/2)/(x+ 1/(x+ (3/2)/(x+ ...))))
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0f64;
    for j in 1..=300u32 {
        let a = if j == 1 { 1.0 } else { (f64::from(j) - 1.0) * 0.5 };
        d = x + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = x + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f * (-x * x).exp() / std::f64::consts::PI.sqrt()
}

// Taylor coefficients of 1/Gamma(1+x) (A&S 6.1.34, shifted); even-index
// entries feed the Temme Gamma1 expansion near mu = 0.
pub(crate) const RECIP_GAMMA1P: [f64; 14] = [
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.16653861138229148950,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.0000201348547807882387,
    -0.0000012504934821426707,
    0.0000011330272319816959,
];

/// Temme's Γ₁(μ) = [1/Γ(1-μ) - 1/Γ(1+μ)]/(2μ) for |μ| ≤ 1/2.
pub(crate) fn temme_gamma1(mu: f64) -> f64 {
    if mu.abs() < 0.15 {
        // even-index Taylor terms; the direct difference cancels here
        let m2 = mu * mu;
        -(RECIP_GAMMA1P[1]
            + m2 * (RECIP_GAMMA1P[3]
                + m2 * (RECIP_GAMMA1P[5]
                    + m2 * (RECIP_GAMMA1P[7] + m2 * (RECIP_GAMMA1P[9] + m2 * RECIP_GAMMA1P[11])))))
    } else {
        (recip_gamma(1.0 - mu) - recip_gamma(1.0 + mu)) / (2.0 * mu)
    }
}

/// Temme's Γ₂(μ) = [1/Γ(1-μ) + 1/Γ(1+μ)]/2.
pub(crate) fn temme_gamma2(mu: f64) -> f64 {
    0.5 * (recip_gamma(1.0 - mu) + recip_gamma(1.0 + mu))
}
