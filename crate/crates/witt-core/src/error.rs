use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("size budget exceeded: {0}")]
    Budget(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a restricted subalgebra: {0}")]
    NotSubalgebra(String),

    #[error("polynomial is not invariant under the action: {0}")]
    NotInvariant(String),

    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("characteristic polynomial has a nonzero coefficient outside the p-power pattern: {0}")]
    VanishingPattern(String),

    #[error("structure verification failed: {0}")]
    Structure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
