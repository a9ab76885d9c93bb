use thiserror::Error;

/// Errors raised across the kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// Two computation routes that must agree did not. Always a defect.
    #[error("internal defect: {0}")]
    Internal(String),

    #[error("path comes within {distance:e} of the singular set at z = {at} (clearance {clearance:e})")]
    ClearanceViolated {
        at: String,
        distance: f64,
        clearance: f64,
    },

    #[error("quadrature did not converge, final error estimate {estimate:e}")]
    QuadratureNonConvergence { estimate: f64 },

    #[error("step size underflow near a singular point at z = {at}")]
    SingularProximity { at: String },

    #[error("ill-conditioned difference stencil: {0}")]
    IllConditioned(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
