use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Index ν, starting point a and barrier b of a Bessel process hitting
/// problem. Law-level routines additionally require the downward case
/// b < a; the upward case decays exponentially and is out of scope here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselParams {
    pub nu: f64,
    pub a: f64,
    pub b: f64,
}

impl BesselParams {
    /// Validates a > 0 and b > 0; ν may be any real number.
    pub fn new(nu: f64, a: f64, b: f64) -> Result<Self> {
        if !nu.is_finite() {
            return Err(Error::domain(format!("nu must be finite, got {nu}")));
        }
        if !(a > 0.0) {
            return Err(Error::domain(format!("start a must be > 0, got {a}")));
        }
        if !(b > 0.0) {
            return Err(Error::domain(format!("barrier b must be > 0, got {b}")));
        }
        Ok(BesselParams { nu, a, b })
    }

    /// Process dimension δ = 2(ν + 1).
    pub fn dimension(&self) -> f64 {
        2.0 * (self.nu + 1.0)
    }

    /// Enforces the downward case 0 < b < a required by the hitting laws.
    pub fn require_downward(&self) -> Result<()> {
        if self.b >= self.a {
            return Err(Error::domain(format!(
                "downward case requires b < a (got a={}, b={}); the upward tail decays \
                 exponentially and is not covered",
                self.a, self.b
            )));
        }
        Ok(())
    }
}
