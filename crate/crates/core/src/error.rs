use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Subsystem labels or dimensions that do not match a state's signature.
    #[error("signature error: {0}")]
    Signature(String),

    /// An argument outside its admissible range (rank > dim, q <= 0, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A matrix or vector that fails the state invariants (norm, trace, hermiticity, PSD).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A numerical contract that was violated by the inputs (non-isometric mixing matrix,
    /// dimension overflow, hypothesis of a check not met).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Operation not defined for the requested measure.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
