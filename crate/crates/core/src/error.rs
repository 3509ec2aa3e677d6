use thiserror::Error;

/// Errors produced by the numerical routines.
///
/// `Domain` and `Config` indicate bad inputs (a precondition was violated),
/// `Instability` and `Convergence` indicate that a computation could not be
/// carried out to the promised accuracy in double precision.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A mathematical precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value is outside its admissible range.
    #[error("config error: {0}")]
    Config(String),

    /// The result exceeds the representable floating-point range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// An iteration or series failed to converge.
    #[error("failed to converge: {0}")]
    Convergence(String),

    /// The inversion order ladder disagrees; the requested point is too
    /// extreme for double precision.
    #[error("numerical instability: {0}")]
    Instability(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
