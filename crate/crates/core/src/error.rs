//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("element does not belong to this field context")]
    ContextMismatch,

    #[error("zero has no inverse, order or logarithm")]
    ZeroElement,

    #[error("matrix is singular")]
    Singular,

    #[error("rows are linearly dependent")]
    RankDeficient,

    #[error("message {message} outside the range {min}..={max}")]
    MessageOutOfRange { message: u128, min: u128, max: u128 },

    #[error("word is not a codeword of this code")]
    NotInCode,

    #[error("element order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: u128 },

    #[error("no cyclic vector found; matrix is not cyclic")]
    NonCyclic,

    #[error("target not in the group generated by the base")]
    LogNotFound,

    #[error("{0} has no root in the given field")]
    NoRoot(String),

    #[error("enumeration of {count} items exceeds the supported limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },

    #[error("isometry construction failed: {0}")]
    IsometryConstruction(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
