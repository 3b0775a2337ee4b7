//! Optimal video-segment boundaries from parametric temporal proposals.
//!
//! Given a proposal curve (Gaussian or one of seven alternatives, single or
//! mixture), the solver returns the segment maximizing coverage of the curve
//! minus a penalty on segment length. For every supported kind that optimum
//! is the superlevel interval where the curve stays above the penalty
//! weight, available in closed form (logistic by bisection), and degenerates
//! to the proposal center once the weight reaches 1.
//!
//! The crate also ships the surrounding tooling: ranking strategies for
//! picking top-k predictions, recall/IoU metrics, a brute-force grid oracle
//! for validating the closed forms, and a batch CLI with penalty-weight
//! sweep and correlation commands.
//!
//! ```
//! use gbo::{KernelKind, PenaltyWeight, ProposalKernel, ScaleConstants, solve_levelset};
//!
//! let scales = ScaleConstants::default();
//! let kernel = ProposalKernel::new(KernelKind::Gauss, 0.5, 1.8)?;
//! let solution = solve_levelset(&kernel, &scales, PenaltyWeight::new(0.883)?);
//! let segment = solution.segment.clip(0.0, 1.0);
//! // boundaries sit where the curve crosses the penalty weight
//! assert!((kernel.evaluate(&scales, segment.start()) - 0.883).abs() < 1e-12);
//! assert!(segment.length() > 0.0 && solution.objective > 0.0);
//! # Ok::<(), gbo::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod metrics;
pub mod mixture;
pub mod proposals;
pub mod selection;
pub mod solver;

pub use error::{Error, Result};
pub use metrics::{
    mean_iou_at, pearson, recall_at, tiou, EvalReport, EvalSample, MetricKind, MetricSpec,
    ThresholdMode,
};
pub use mixture::{solve_mixture, MixtureComponent, MixtureProposal, WidthConvention};
pub use proposals::{KernelKind, ProposalKernel, ScaleConstants};
pub use selection::{pairwise_iou_scores, rank, RankedPredictions, SelectionStrategy};
pub use solver::{
    coverage_gaussian, erf, objective, optimal_objective_gaussian, oracle_maximize,
    oracle_maximize_in, solve_gaussian, solve_levelset, GboSolution, PenaltyWeight, Segment,
    ORACLE_CELL_BUDGET, ORACLE_DOMAIN,
};
