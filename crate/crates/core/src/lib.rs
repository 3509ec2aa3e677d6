//! First hitting times of Bessel processes in the downward case 0 < b < a:
//! the exact Laplace transform and its numerical inversion, exact-transition
//! Monte Carlo with two tail estimators, the large-t asymptotic laws, and a
//! verification harness that ties the three routes together.
//!
//! The tail convention follows the transience structure of the process:
//! for index ν > 0 the reported tail is P(t < τ_b < ∞) — the full survival
//! probability does not decay since P(τ_b = ∞) = 1 - (b/a)^{2ν} > 0 —
//! while for ν ≤ 0 the process hits b almost surely and the tail is
//! P(τ_b > t). All ν < 0 laws reduce exactly to ν > 0 through
//! P_a^{(-ν)}(τ_b ∈ dt) = (a/b)^{2ν} P_a^{(ν)}(τ_b ∈ dt).

pub mod error;
pub mod hitting;
pub mod inversion;
pub mod monte_carlo;
pub mod params;
pub mod process;
pub mod special;
pub mod verification;

pub use error::{Error, Result};
pub use hitting::{
    asymptotic_tail, cdf, closed_form_tail, density, duality_density_factor, laplace_transform,
    prob_hit_ever, tail_inversion, Method, TailEstimate,
};
pub use inversion::{invert, stehfest_weights, InversionConfig};
pub use monte_carlo::{
    sample_squared_bessel_step, tail_mc_indicator, tail_mc_lemma22, Estimator, McConfig,
    McEstimate,
};
pub use params::BesselParams;
pub use process::{neg_moment, transition_density};
pub use special::SeriesEval;
pub use verification::{
    check_constant, check_moment_sandwich, fit_decay_slope, log_grid, tail_asymptote_gap,
    ConstantReport, SandwichReport, SlopeFit,
};
