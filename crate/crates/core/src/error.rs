use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("nodes coincide at x = {0}")]
    CoincidentNodes(f64),

    #[error("node {node} lies outside the interval [{lo}, {hi}]")]
    NodeOutsideInterval { node: f64, lo: f64, hi: f64 },

    #[error("invalid interval: a = {a} must be less than b = {b}")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite function value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("search window too small: {0}")]
    WindowTooSmall(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::InvalidInterval { a, b })
    }
}
