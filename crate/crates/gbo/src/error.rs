//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by kernel construction, solvers, ranking, and metrics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown kernel kind `{0}`")]
    UnknownKind(String),

    #[error("kernel width must be positive and finite, got {0}")]
    InvalidWidth(f64),

    #[error("kernel center must lie in [0, 1], got {0}")]
    InvalidCenter(f64),

    #[error("loss must be nonnegative and finite, got {0}")]
    InvalidLoss(f64),

    #[error("base scale must be finite and exceed 8 (so that nu = base/4 > 2), got {0}")]
    InvalidScaleBase(f64),

    #[error("segment start {start} must not exceed end {end}")]
    InvalidSegment { start: f64, end: f64 },

    #[error("penalty weight must be nonnegative and finite, got {0}")]
    InvalidPenalty(f64),

    #[error("standard deviation must be positive and finite, got {0}")]
    InvalidStdDev(f64),

    #[error("penalty weight {0} is outside (0, 1) where this closed form is defined")]
    PenaltyOutsideOpenUnit(f64),

    #[error("grid step must be positive and finite, got {0}")]
    InvalidGridStep(f64),

    #[error("grid of {cells} cells exceeds the budget of {budget}")]
    GridBudgetExceeded { cells: usize, budget: usize },

    #[error("mixture proposal needs at least one component")]
    EmptyMixture,

    #[error("proposal {index} has no loss value, required by strategy {strategy}")]
    MissingLoss {
        index: usize,
        strategy: &'static str,
    },

    #[error("ranking needs at least one proposal")]
    EmptyProposals,

    #[error("evaluation needs at least one sample")]
    EmptySampleSet,

    #[error("sample {index} has no predictions")]
    EmptyPredictions { index: usize },

    #[error("rank depth n must be at least 1")]
    InvalidRankDepth,

    #[error("IoU threshold must lie strictly inside (0, 1), got {0}")]
    InvalidIouThreshold(f64),

    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("series must have at least two points, got {0}")]
    SeriesTooShort(usize),

    #[error("series has zero variance; correlation is undefined")]
    ZeroVariance,
}

pub type Result<T> = std::result::Result<T, Error>;
