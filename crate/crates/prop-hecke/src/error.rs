//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown preset `{0}`")]
    BadPreset(String),
    #[error("invalid field parameters: {0}")]
    BadField(String),
    #[error("element is not polynomial in the wall parameters: {0}")]
    NonPolynomial(String),
    #[error("element does not lie in the required signed subalgebra: {0}")]
    NotSigned(String),
    #[error("defining relations fail on constructed module: {0}")]
    RelationFailure(String),
    #[error("linear solve failed: {0}")]
    SolveFailure(String),
    #[error("computation cap exceeded: {0}")]
    CapExceeded(String),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
