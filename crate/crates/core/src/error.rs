use thiserror::Error;

use crate::domain::Cell;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cell {0} lies outside the factor grid")]
    CellOutOfRange(Cell),

    #[error("cell {0} has zero mass")]
    ZeroMassCell(Cell),

    #[error("empty cell set")]
    EmptyCellSet,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("malformed family: {0}")]
    Malformed(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("rule/function index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("rules are defined over different skeletons: {0}")]
    SkeletonMismatch(String),

    #[error("enumeration would produce {count} items, above the cap of {cap}")]
    ExplosionGuard { count: u128, cap: u128 },

    #[error("KL divergence is infinite: q vanishes at index {index} where p = {p}")]
    InfiniteKl { index: usize, p: f64 },

    #[error("denominator gap {0:e} is numerically zero")]
    DegenerateGap(f64),

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("learner violates the convergence assumption: {0}")]
    ConvergenceViolated(String),

    #[error("generation collision: {0}")]
    Collision(String),

    #[error("not identifiable: {reason}")]
    NotIdentifiable { reason: String, witnesses: Vec<(Cell, Cell)> },

    #[error("inconsistent observations: {0}")]
    Inconsistent(String),

    #[error("cell {0} is unreachable from the observed support")]
    Unreachable(Cell),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
