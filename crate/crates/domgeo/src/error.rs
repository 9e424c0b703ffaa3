use thiserror::Error;

/// Errors reported by dataset construction, index builds, and queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate `{0}` is not finite")]
    NonFiniteCoordinate(String),

    #[error("real-space dimension must be 1 or 2, got {0}")]
    UnsupportedRealDimension(usize),

    #[error("feature-space dimension must be at least 1, got {0}")]
    UnsupportedFeatureDimension(usize),

    #[error("point counts differ: {reals} locations vs {feats} ratings")]
    PointCountMismatch { reals: usize, feats: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid rectangle: {0}")]
    InvalidRect(String),

    #[error("duplicate id {0}")]
    DuplicateId(u32),

    #[error("unknown id {0}")]
    UnknownId(u32),

    #[error("id {0} is not currently stored")]
    IdNotStored(u32),

    #[error("duplicate value in input; values must be pairwise distinct")]
    DuplicateValue,

    #[error("algorithm `{algo}` requires {requirement}")]
    AlgorithmMismatch {
        algo: &'static str,
        requirement: &'static str,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
