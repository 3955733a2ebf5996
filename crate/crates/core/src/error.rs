use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Gamma evaluated at a non-positive integer.
    #[error("pole of the Gamma function at {0}")]
    Pole(String),
    /// Iterative method stopped before meeting its tolerance.
    #[error("{context}: not converged (estimate {estimate:e}, error {error:e})")]
    NotConverged {
        context: String,
        estimate: f64,
        error: f64,
    },
    /// Precondition on sizes, windows or supports violated.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Geometric construction could not be completed.
    #[error("structural error: {0}")]
    Structural(String),
    /// Geodesic integration failed; carries the last accepted point.
    #[error("step-size underflow at phi={phi}, rho={rho}")]
    StepUnderflow { phi: f64, rho: f64 },
    /// Degenerate numerical input, e.g. a fit with coincident abscissae.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}
