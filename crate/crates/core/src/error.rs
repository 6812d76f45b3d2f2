//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument left the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A search found no admissible configuration, e.g. no scales with a
    /// positive gap.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// The requested estimate does not exist for the given data.
    #[error("undefined estimate: {0}")]
    Undefined(String),
    /// A manifold description is malformed or unsupported.
    #[error("invalid manifold spec: {0}")]
    InvalidSpec(String),
    /// An incremental sampler hit its point cap before reaching its target.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// Not enough data to run the requested procedure.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}
