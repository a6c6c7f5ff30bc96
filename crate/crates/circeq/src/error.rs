//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CircError>;

#[derive(Debug, Error)]
pub enum CircError {
    #[error("cannot parse residue set literal `{0}`: {1}")]
    ParseSet(String, String),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(u64, u64),

    #[error("matrix order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("matrix order {0} exceeds the supported maximum of {1}")]
    OrderTooLarge(usize, usize),

    #[error("total weight {0} exceeds the supported bound {1} for vanishing-sum analysis")]
    WeightBound(usize, usize),

    #[error("invalid argument: {0}")]
    BadArgument(String),

    #[error("checkpoint version {found} is not supported (expected {expected})")]
    CheckpointVersion { found: u32, expected: u32 },

    #[error("checkpoint does not match the requested search: {0}")]
    CheckpointMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
