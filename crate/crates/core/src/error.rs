use thiserror::Error;

/// Errors produced by the spectrum algebra, catalyst construction, rate
/// model and simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested (n, alpha) lies outside the range where a catalyst is
    /// meaningful.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("spectrum dimension {dim} exceeds the configured cap {cap}")]
    ResourceLimit { dim: usize, cap: usize },

    /// A numerical procedure did not converge or failed its own
    /// post-condition check. `best` carries the best point found, if any.
    #[error("numeric failure: {message}")]
    NumericFailure {
        message: String,
        best: Option<Vec<f64>>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, best: Option<Vec<f64>>) -> Self {
        Error::NumericFailure {
            message: msg.into(),
            best,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
