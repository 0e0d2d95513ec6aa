use thiserror::Error;

use crate::weights::Weight;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidType(String),

    #[error("characters belong to different root systems ({left} vs {right})")]
    MismatchedSystem { left: String, right: String },

    #[error("weight {weight} has {got} coordinates, system has rank {rank}")]
    RankMismatch { weight: Weight, got: usize, rank: usize },

    #[error("weight {0} is not dominant")]
    NotDominant(Weight),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("character is not divisible: {0}")]
    NotDivisible(String),

    #[error("simple character L({0}) is not determined by the available data")]
    SimpleCharUnavailable(Weight),

    /// The greedy G1B elimination hit a negative coefficient. This can only
    /// happen if a simple character is wrong.
    #[error("negative remainder at weight {0} during elimination")]
    NegativeRemainder(Weight),

    #[error("certificate with status {0} cannot be refined")]
    NotRefinable(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
