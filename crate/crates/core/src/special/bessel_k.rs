//! Modified Bessel function of the second kind, real order.
//!
//! K_ν is even in ν, so evaluation reduces to ν ≥ 0. The order is split as
//! ν = n + μ with μ ∈ [-1/2, 1/2]; (K_μ, K_{μ+1}) come from Temme's series
//! (z ≤ 2) or Steed's continued fraction (z > 2), then the standard upward
//! recurrence lifts to ν. This is uniformly valid across integer orders —
//! no ν-offset trick, which would cost about five digits near integers.

use super::{gamma, sin_pi, temme_gamma1, temme_gamma2};
use crate::error::{Error, Result};

const MAX_ITER: usize = 1000;

/// K_ν(z) for any real ν and z > 0. Underflows to 0 for very large z;
/// use [`bessel_k_scaled`] in exponent-sensitive ratios.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64> {
    Ok(bessel_k_scaled(nu, z)? * (-z).exp())
}

/// e^z K_ν(z): the scaled form stays representable for large z.
pub fn bessel_k_scaled(nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain(format!("bessel_k requires z > 0, got {z}")));
    }
    let nu = nu.abs(); // K_{-nu} = K_nu
    let n = nu.round();
    let mu = nu - n;
    let (mut k_mu, mut k_mu1) = if z <= 2.0 {
        temme_k_scaled(mu, z)?
    } else {
        steed_cf2_k_scaled(mu, z)?
    };
    // upward recurrence K_{j+1} = K_{j-1} + 2j/z K_j, stable in this direction
    let mut j = mu;
    for _ in 0..(n as i64) {
        let next = k_mu + 2.0 * (j + 1.0) / z * k_mu1;
        k_mu = k_mu1;
        k_mu1 = next;
        j += 1.0;
        if !k_mu1.is_finite() {
            return Err(Error::Overflow(format!("bessel_k({nu}, {z}) overflows f64")));
        }
    }
    Ok(k_mu)
}

// Temme's series for (e^z K_mu, e^z K_{mu+1}), |mu| <= 1/2, z <= 2.
fn temme_k_scaled(mu: f64, z: f64) -> Result<(f64, f64)> {
    debug_assert!(mu.abs() <= 0.5 + 1e-12 && z <= 2.0);
    let half_z = 0.5 * z;
    let lhz = half_z.ln();
    let sigma = -mu * lhz;
    let pi_mu = std::f64::consts::PI * mu;
    let sinrat = if pi_mu.abs() < 1e-300 {
        1.0
    } else {
        pi_mu / sin_pi(mu)
    };
    let sinhrat = if sigma.abs() < 1e-10 {
        1.0 + sigma * sigma / 6.0
    } else {
        sigma.sinh() / sigma
    };
    let g1 = temme_gamma1(mu);
    let g2 = temme_gamma2(mu);
    let half_z_mu = (mu * lhz).exp(); // (z/2)^mu
    let mut f = sinrat * (sigma.cosh() * g1 - sinhrat * lhz * g2);
    let mut p = 0.5 / half_z_mu * gamma(1.0 + mu)?;
    let mut q = 0.5 * half_z_mu * gamma(1.0 - mu)?;
    let mut c = 1.0f64;
    let mut sum0 = f;
    let mut sum1 = p;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        f = (kf * f + p + q) / (kf * kf - mu * mu);
        p /= kf - mu;
        q /= kf + mu;
        let h = p - kf * f;
        c *= half_z * half_z / kf;
        sum0 += c * f;
        sum1 += c * h;
        if (c * f).abs() < 0.5 * f64::EPSILON * sum0.abs() {
            let ez = z.exp();
            return Ok((sum0 * ez, 2.0 / z * sum1 * ez));
        }
    }
    Err(Error::Convergence(format!(
        "Temme series for K did not converge (mu={mu}, z={z})"
    )))
}

// Steed's continued fraction CF2 for (e^z K_mu, e^z K_{mu+1}), z > 2
// (Thompson-Barnett).
fn steed_cf2_k_scaled(mu: f64, z: f64) -> Result<(f64, f64)> {
    debug_assert!(z > 1.0);
    let mut a = mu * mu - 0.25;
    let a1 = a;
    let mut b = 2.0 * (z + 1.0);
    let mut d = 1.0 / b;
    let mut delta = d;
    let mut f = d;
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    let mut q = -a;
    let mut c = -a;
    let mut s = 1.0 + q * delta;
    for k in 2..MAX_ITER {
        let kf = k as f64;
        a -= 2.0 * (kf - 1.0);
        b += 2.0;
        d = 1.0 / (a * d + b);
        delta *= b * d - 1.0;
        f += delta;
        let t = (prev - (b - 2.0) * cur) / a;
        prev = cur;
        cur = t;
        c *= -a / kf;
        q += c * t;
        s += q * delta;
        if (q * delta).abs() < 0.5 * f64::EPSILON * s.abs() {
            let k_mu = (std::f64::consts::PI / (2.0 * z)).sqrt() / s;
            let k_mu1 = k_mu * (mu + z + 0.5 - a1 * f) / z;
            return Ok((k_mu, k_mu1));
        }
    }
    Err(Error::Convergence(format!(
        "Steed CF2 for K did not converge (mu={mu}, z={z})"
    )))
}
