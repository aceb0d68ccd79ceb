//! Error type shared across the engine.

use thiserror::Error;

/// Errors raised by geometry, sampling, transforms, simulation and pricing.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation (negative area,
    /// lag at the singular boundary, argument beyond an analyticity strip).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid parameters for a model object.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Inconsistent or incomplete run configuration. One message per
    /// violation, joined by "; ".
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical procedure failed to converge or produced values outside
    /// its validated tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
