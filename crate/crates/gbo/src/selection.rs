//! Prediction scoring and ranking.
//!
//! Four strategies: lowest reconstruction loss, highest mean pairwise IoU
//! against the other proposals, or the IoU score reweighted by losses
//! normalized by their sum or by their maximum.

use crate::error::{Error, Result};
use crate::metrics::tiou;
use crate::solver::Segment;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionStrategy {
    OnlyLoss,
    OnlyIoU,
    IoULossSum,
    IoULossMax,
}

impl SelectionStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            SelectionStrategy::OnlyLoss => "only_loss",
            SelectionStrategy::OnlyIoU => "only_iou",
            SelectionStrategy::IoULossSum => "iou_loss_sum",
            SelectionStrategy::IoULossMax => "iou_loss_max",
        }
    }

    fn needs_loss(self) -> bool {
        !matches!(self, SelectionStrategy::OnlyIoU)
    }
}

impl std::fmt::Display for SelectionStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SelectionStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "only_loss" => Ok(SelectionStrategy::OnlyLoss),
            "only_iou" => Ok(SelectionStrategy::OnlyIoU),
            "iou_loss_sum" => Ok(SelectionStrategy::IoULossSum),
            "iou_loss_max" => Ok(SelectionStrategy::IoULossMax),
            other => Err(format!("unknown selection strategy `{other}`")),
        }
    }
}

/// Proposals ordered by nonincreasing score. Top-k is a prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPredictions {
    strategy: SelectionStrategy,
    items: Vec<(Segment, f64)>,
}

impl RankedPredictions {
    pub fn strategy(&self) -> SelectionStrategy {
        self.strategy
    }

    pub fn items(&self) -> &[(Segment, f64)] {
        &self.items
    }

    pub fn top(&self, k: usize) -> &[(Segment, f64)] {
        &self.items[..k.min(self.items.len())]
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.items.iter().map(|(seg, _)| *seg).collect()
    }
}

/// Mean tIoU of each segment against all the others; a lone segment scores 1.
pub fn pairwise_iou_scores(segments: &[Segment]) -> Vec<f64> {
    let n = segments.len();
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| {
            let total: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| tiou(&segments[i], &segments[j]))
                .sum();
            total / (n - 1) as f64
        })
        .collect()
}

/// Order proposals by the strategy score, descending; ties keep input order.
///
/// For `OnlyLoss` the stored score is the negated loss so that higher is
/// better throughout.
pub fn rank(
    proposals: &[(Segment, Option<f64>)],
    strategy: SelectionStrategy,
) -> Result<RankedPredictions> {
    if proposals.is_empty() {
        return Err(Error::EmptyProposals);
    }
    let losses: Vec<Option<f64>> = proposals.iter().map(|(_, l)| *l).collect();
    if strategy.needs_loss() {
        if let Some(index) = losses.iter().position(Option::is_none) {
            return Err(Error::MissingLoss {
                index,
                strategy: strategy.as_str(),
            });
        }
    }
    let segments: Vec<Segment> = proposals.iter().map(|(s, _)| *s).collect();
    let scores: Vec<f64> = match strategy {
        SelectionStrategy::OnlyLoss => losses.iter().map(|l| -l.unwrap()).collect(),
        SelectionStrategy::OnlyIoU => pairwise_iou_scores(&segments),
        SelectionStrategy::IoULossSum => {
            let iou = pairwise_iou_scores(&segments);
            let total: f64 = losses.iter().map(|l| l.unwrap()).sum();
            weight_scores(&iou, &losses, total)
        }
        SelectionStrategy::IoULossMax => {
            let iou = pairwise_iou_scores(&segments);
            let max = losses.iter().map(|l| l.unwrap()).fold(0.0f64, f64::max);
            // with every loss at the maximum the weights would all vanish,
            // losing the IoU ordering; treat that like the all-zero case
            let all_equal = losses.iter().all(|l| l.unwrap() == max);
            if all_equal {
                iou
            } else {
                weight_scores(&iou, &losses, max)
            }
        }
    };
    let mut order: Vec<usize> = (0..proposals.len()).collect();
    // stable sort: equal scores stay in input order
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    Ok(RankedPredictions {
        strategy,
        items: order
            .into_iter()
            .map(|i| (segments[i], scores[i]))
            .collect(),
    })
}

/// IoU scores reweighted by `1 - loss / denominator`. A zero denominator
/// (all losses zero) degrades to the plain IoU scores.
fn weight_scores(iou: &[f64], losses: &[Option<f64>], denominator: f64) -> Vec<f64> {
    iou.iter()
        .zip(losses)
        .map(|(&s, l)| {
            let weight = if denominator > 0.0 {
                1.0 - l.unwrap() / denominator
            } else {
                1.0
            };
            s * weight
        })
        .collect()
}
