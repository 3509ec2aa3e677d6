//! Path simulation of the squared Bessel process with exact one-step
//! transitions, barrier-hitting detection on a (locally refined) time grid,
//! and the two tail estimators: the plain indicator and the conditional-
//! expectation payoff (b/R_t)^{2ν} 1{inf R > b}, which needs no simulation
//! past t.
//!
//! Determinism: every path gets its own counter-based ChaCha8 stream
//! derived from (seed, path index), and batches are reduced in index order,
//! so results are bit-identical for any thread count.
//!
//! Crossing detection uses the grid minimum only (no bridge correction).
//! A uniform grid at step 0.01 misses enough excursions to bias the
//! ν = 1/2 reference case by about +7e-3, so steps taken within
//! 6√h of the barrier are split 64-fold, which brings the measured bias
//! under 1e-3. Detection can still only miss crossings, so both estimators
//! remain biased up by the detection component.

use crate::error::{Error, Result};
use crate::params::BesselParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Simulation configuration: path count, grid step on [0, t], horizon for
/// the post-t hitting search of the indicator estimator, base seed, and the
/// batch width used for deterministic parallel reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub paths: u64,
    pub step: f64,
    pub horizon: f64,
    pub seed: u64,
    pub streams: u64,
}

impl McConfig {
    pub fn new(paths: u64, step: f64, horizon: f64, seed: u64) -> Result<Self> {
        let cfg = McConfig { paths, step, horizon, seed, streams: 4096 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::config("paths must be >= 1"));
        }
        if !(self.step > 0.0) {
            return Err(Error::config(format!("step must be > 0, got {}", self.step)));
        }
        if !(self.horizon > 0.0) || self.step > self.horizon {
            return Err(Error::config(format!(
                "horizon must satisfy horizon >= step > 0, got horizon={}, step={}",
                self.horizon, self.step
            )));
        }
        if self.streams == 0 {
            return Err(Error::config("streams must be >= 1"));
        }
        Ok(())
    }
}

/// Which estimator produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Indicator,
    Lemma22,
}

/// Monte Carlo mean and standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub paths: u64,
    pub estimator: Estimator,
}

/// One exact transition of the squared Bessel process of dimension δ > 0:
/// X_{s+h} | X_s = x is h times a noncentral χ² with δ degrees of freedom
/// and noncentrality x/h. δ > 1 uses χ²_{δ-1} + (Z + √(x/h))²; δ ≤ 1 uses
/// the Poisson mixture of central χ² — exact for all δ without rejection.
pub fn sample_squared_bessel_step(
    x: f64,
    h: f64,
    delta: f64,
    rng: &mut impl rand::Rng,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::domain(format!(
            "squared Bessel dimension must be > 0 (nu > -1), got {delta}"
        )));
    }
    if !(x >= 0.0) || !(h > 0.0) {
        return Err(Error::domain(format!("need x >= 0 and h > 0, got x={x}, h={h}")));
    }
    Ok(step_unchecked(x, h, delta, rng))
}

#[inline]
fn step_unchecked(x: f64, h: f64, delta: f64, rng: &mut impl rand::Rng) -> f64 {
    let nc = x / h;
    if delta > 1.0 {
        let z: f64 = Normal::new(0.0, 1.0).unwrap().sample(rng);
        let w = if delta > 1.0 + 1e-12 {
            // chi^2_{delta-1} = Gamma(shape (delta-1)/2, scale 2)
            Gamma::new((delta - 1.0) / 2.0, 2.0).unwrap().sample(rng)
        } else {
            0.0
        };
        let zc = z + nc.sqrt();
        h * (w + zc * zc)
    } else {
        let j = if nc > 0.0 {
            Poisson::new(nc / 2.0).unwrap().sample(rng)
        } else {
            0.0
        };
        let shape = (delta + 2.0 * j) / 2.0;
        if shape == 0.0 {
            return 0.0;
        }
        h * Gamma::new(shape, 2.0).unwrap().sample(rng)
    }
}

// Near-barrier refinement: a step started within 6 sqrt(h) of the barrier
// (in radius) is split this many times.
const SUBSTEPS: u32 = 64;

struct PathSim {
    delta: f64,
    b2: f64,
    refine_below: f64, // squared radius threshold for substepping
}

impl PathSim {
    fn new(params: &BesselParams, h: f64) -> Self {
        let margin = params.b + 6.0 * h.sqrt();
        PathSim {
            delta: params.dimension(),
            b2: params.b * params.b,
            refine_below: margin * margin,
        }
    }

    // advance one grid step of size h, detecting barrier crossings on the
    // (substepped) skeleton; returns None once the barrier is hit
    #[inline]
    fn advance(&self, x: f64, h: f64, rng: &mut ChaCha8Rng) -> Option<f64> {
        if x < self.refine_below {
            let hs = h / SUBSTEPS as f64;
            let mut cur = x;
            for _ in 0..SUBSTEPS {
                cur = step_unchecked(cur, hs, self.delta, rng);
                if cur <= self.b2 {
                    return None;
                }
            }
            Some(cur)
        } else {
            let next = step_unchecked(x, h, self.delta, rng);
            if next <= self.b2 {
                None
            } else {
                Some(next)
            }
        }
    }

    // run the grid over [0, t]; Some(x_t) if the skeleton stayed above b
    fn survive_to(&self, t: f64, n_steps: u64, x0: f64, rng: &mut ChaCha8Rng) -> Option<f64> {
        let h = t / n_steps as f64;
        let mut x = x0;
        for _ in 0..n_steps {
            x = self.advance(x, h, rng)?;
        }
        Some(x)
    }

    // search for a hit in (t, horizon]: step size grows with distance from
    // the barrier (and with a hard cap) so that remote excursions are cheap
    // while approaches are still resolved at the base resolution
    fn hits_after(
        &self,
        mut x: f64,
        t: f64,
        horizon: f64,
        base_h: f64,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        let mut s = t;
        while s < horizon {
            let r = x.sqrt();
            let d = r - self.b2.sqrt();
            let dt = (d * d / 16.0).clamp(base_h, 50.0).min(horizon - s);
            if x < self.refine_below {
                match self.advance(x, dt.max(base_h), rng) {
                    Some(next) => x = next,
                    None => return true,
                }
                s += dt.max(base_h);
            } else {
                let next = step_unchecked(x, dt, self.delta, rng);
                if next <= self.b2 {
                    return true;
                }
                x = next;
                s += dt;
            }
        }
        false
    }
}

fn rng_for_path(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

// Deterministic parallel estimate: map path indices to payoffs in fixed-size
// batches, reduce each batch sequentially, then fold batch sums in index
// order. The result is independent of the rayon thread count.
fn run_batches<F>(cfg: &McConfig, payoff: F) -> (f64, f64)
where
    F: Fn(u64, &mut ChaCha8Rng) -> f64 + Sync,
{
    let batch = cfg.streams;
    let n_batches = cfg.paths.div_ceil(batch);
    let sums: Vec<(f64, f64)> = (0..n_batches)
        .into_par_iter()
        .map(|bi| {
            let lo = bi * batch;
            let hi = (lo + batch).min(cfg.paths);
            let mut s = 0.0;
            let mut s2 = 0.0;
            for path in lo..hi {
                let mut rng = rng_for_path(cfg.seed, path);
                let v = payoff(path, &mut rng);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    sums.iter().fold((0.0, 0.0), |acc, &(s, s2)| (acc.0 + s, acc.1 + s2))
}

fn finish(cfg: &McConfig, estimator: Estimator, sum: f64, sum_sq: f64) -> McEstimate {
    let n = cfg.paths as f64;
    let mean = sum / n;
    let var = ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0);
    McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        paths: cfg.paths,
        estimator,
    }
}

fn grid_steps(t: f64, step: f64) -> u64 {
    ((t / step).ceil() as u64).max(1)
}

/// Indicator估 estimator. For ν > 0 it estimates P(t < τ_b < ∞) as the
/// fraction of paths whose skeleton stays above b up to t and then hits b
/// in (t, horizon]; the truncation deficit is bounded by the tail at the
/// horizon (Lemma 2.1 scale C t^{-ν}), so pick horizon ≫ t. For ν ≤ 0 it
/// estimates P(τ_b > t) and no post-t simulation happens.
pub fn tail_mc_indicator(params: &BesselParams, t: f64, cfg: &McConfig) -> Result<McEstimate> {
    params.require_downward()?;
    cfg.validate()?;
    if !(t > 0.0) {
        return Err(Error::domain(format!("t must be > 0, got {t}")));
    }
    if params.nu > 0.0 && cfg.horizon < t {
        return Err(Error::config(format!(
            "indicator estimator needs horizon >= t, got horizon={} < t={t}",
            cfg.horizon
        )));
    }
    if cfg.step > t / 100.0 {
        return Err(Error::config(format!(
            "grid step must be <= t/100 for crossing detection, got {} > {}",
            cfg.step,
            t / 100.0
        )));
    }
    let sim = PathSim::new(params, cfg.step);
    let n_steps = grid_steps(t, cfg.step);
    let x0 = params.a * params.a;
    let nu_positive = params.nu > 0.0;
    let (horizon, base_h) = (cfg.horizon, cfg.step);
    let (sum, sum_sq) = run_batches(cfg, |_path, rng| {
        match sim.survive_to(t, n_steps, x0, rng) {
            None => 0.0,
            Some(xt) => {
                if !nu_positive {
                    1.0 // survival event itself
                } else if sim.hits_after(xt, t, horizon, base_h, rng) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    });
    Ok(finish(cfg, Estimator::Indicator, sum, sum_sq))
}

/// Conditional-expectation estimator of P(t < τ_b < ∞) for ν > 0:
/// E[(b/R_t)^{2ν} 1{inf_{s≤t} R_s > b}]. Simulation stops at t — the point
/// of the identity — and the payoff Rao-Blackwellizes the indicator's
/// post-t Bernoulli, so its variance cannot exceed the indicator's.
pub fn tail_mc_lemma22(params: &BesselParams, t: f64, cfg: &McConfig) -> Result<McEstimate> {
    params.require_downward()?;
    cfg.validate()?;
    if !(params.nu > 0.0) {
        return Err(Error::domain(format!(
            "the conditional-expectation estimator needs nu > 0, got {}",
            params.nu
        )));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("t must be > 0, got {t}")));
    }
    if cfg.step > t / 100.0 {
        return Err(Error::config(format!(
            "grid step must be <= t/100 for crossing detection, got {} > {}",
            cfg.step,
            t / 100.0
        )));
    }
    let sim = PathSim::new(params, cfg.step);
    let n_steps = grid_steps(t, cfg.step);
    let x0 = params.a * params.a;
    let two_nu = 2.0 * params.nu;
    let b = params.b;
    let (sum, sum_sq) = run_batches(cfg, |_path, rng| {
        match sim.survive_to(t, n_steps, x0, rng) {
            None => 0.0,
            Some(xt) => (b / xt.sqrt()).powf(two_nu),
        }
    });
    Ok(finish(cfg, Estimator::Lemma22, sum, sum_sq))
}
