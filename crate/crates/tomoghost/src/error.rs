use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("directions are not pairwise linearly independent: {0}")]
    NotPairwiseIndependent(String),

    #[error("directions do not span R^d (rank {rank} < {d})")]
    NotSpanning { rank: usize, d: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("direction has a negative entry; line counting is defined for nonnegative directions only (reflect coordinates first)")]
    UnsupportedOrientation,

    #[error("ghost construction cancelled to empty sets")]
    DegenerateGhost,

    #[error("linear functional maps both sides to the same multiset")]
    DegenerateFunctional,

    #[error("inconsistent profile set: {0}")]
    InvalidProfileSet(String),

    #[error("configuration not contained in grid: point {0:?}")]
    OutOfGrid(Vec<i64>),

    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("internal error: {0}")]
    InternalError(String),
}
