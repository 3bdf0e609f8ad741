//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A graph builder was given unusable parameters.
    #[error("invalid graph spec: {0}")]
    InvalidSpec(String),

    /// An observation-set descriptor is malformed or out of range.
    #[error("invalid observation set: {0}")]
    InvalidSet(String),

    /// A numeric or combinatorial argument violates a precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An internal numerical contract was broken (e.g. a matrix that was
    /// promised Hermitian is not).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Two redundant methods that must agree returned different verdicts.
    /// The CLI maps this to exit status 2.
    #[error("verdict disagreement: {0}")]
    Disagreement(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
