use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rank {0}: must be between 1 and {max}", max = crate::MAX_RANK)]
    InvalidRank(usize),

    #[error("rank {rank} exceeds the configured cap {cap} for {what}")]
    RankAboveCap {
        rank: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("root {0} is not in the long/sum part of the positive roots")]
    NotInUpperPart(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{0} is not an increasing subset")]
    NotIncreasing(String),

    #[error("matrix dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),

    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,

    #[error("parse error: {0}")]
    Parse(String),

    /// A computed object violated a structural identity that should hold for
    /// every input. Carries a description of the offending element.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
