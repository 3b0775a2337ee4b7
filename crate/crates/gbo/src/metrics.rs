//! Recall / IoU evaluation and curve correlation.
//!
//! `R@n,IoU=m` is the percentage of samples whose best of the top-n
//! predictions has tIoU above the threshold (strictly, by default);
//! `R@n,mIoU` is the mean over samples of that best tIoU, times 100.

use crate::error::{Error, Result};
use crate::solver::Segment;

/// Temporal intersection over union of two segments.
///
/// When the union has zero length (both segments degenerate) the value is 1
/// if they are the same point and 0 otherwise.
pub fn tiou(a: &Segment, b: &Segment) -> f64 {
    let intersection = (a.end().min(b.end()) - a.start().max(b.start())).max(0.0);
    let union = a.length() + b.length() - intersection;
    if union <= 0.0 {
        if a.start() == b.start() {
            1.0
        } else {
            0.0
        }
    } else {
        intersection / union
    }
}

/// Whether a tIoU must exceed or merely reach the threshold to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    Strict,
    Inclusive,
}

impl ThresholdMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdMode::Strict => "strict",
            ThresholdMode::Inclusive => "inclusive",
        }
    }

    fn passes(self, value: f64, threshold: f64) -> bool {
        match self {
            ThresholdMode::Strict => value > threshold,
            ThresholdMode::Inclusive => value >= threshold,
        }
    }
}

impl std::str::FromStr for ThresholdMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strict" => Ok(ThresholdMode::Strict),
            "inclusive" => Ok(ThresholdMode::Inclusive),
            other => Err(format!("unknown threshold mode `{other}`")),
        }
    }
}

/// One evaluated video/query: ranked predictions plus the ground truth,
/// both on the same time scale.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSample {
    pub predictions: Vec<Segment>,
    pub ground_truth: Segment,
}

impl EvalSample {
    pub fn new(predictions: Vec<Segment>, ground_truth: Segment) -> Self {
        EvalSample {
            predictions,
            ground_truth,
        }
    }
}

fn best_tiou(sample: &EvalSample, n: usize) -> f64 {
    sample
        .predictions
        .iter()
        .take(n)
        .map(|p| tiou(p, &sample.ground_truth))
        .fold(0.0, f64::max)
}

fn check_samples(samples: &[EvalSample], n: usize) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if n == 0 {
        return Err(Error::InvalidRankDepth);
    }
    if let Some(index) = samples.iter().position(|s| s.predictions.is_empty()) {
        return Err(Error::EmptyPredictions { index });
    }
    Ok(())
}

/// Percentage of samples whose best top-n tIoU passes the threshold `m`.
/// Samples with fewer than `n` predictions use all they have.
pub fn recall_at(samples: &[EvalSample], n: usize, m: f64, mode: ThresholdMode) -> Result<f64> {
    check_samples(samples, n)?;
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::InvalidIouThreshold(m));
    }
    let hits = samples
        .iter()
        .filter(|s| mode.passes(best_tiou(s, n), m))
        .count();
    Ok(100.0 * hits as f64 / samples.len() as f64)
}

/// Mean over samples of the best top-n tIoU, as a percentage.
pub fn mean_iou_at(samples: &[EvalSample], n: usize) -> Result<f64> {
    check_samples(samples, n)?;
    let total: f64 = samples.iter().map(|s| best_tiou(s, n)).sum();
    Ok(100.0 * (total / samples.len() as f64))
}

/// Sample Pearson correlation. Errors on length mismatch, fewer than two
/// points, or a constant series. Identical series correlate to exactly 1.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::SeriesTooShort(x.len()));
    }
    for series in [x, y] {
        let min = series.iter().copied().fold(f64::INFINITY, f64::min);
        let max = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if min == max {
            return Err(Error::ZeroVariance);
        }
    }
    if x == y {
        return Ok(1.0);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let da = a - mx;
        let db = b - my;
        sxx += da * da;
        syy += db * db;
        sxy += da * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// A named metric: recall at an IoU threshold, or mean IoU, at rank depth n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricKind {
    RecallAt(f64),
    MeanIou,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSpec {
    pub n: usize,
    pub kind: MetricKind,
}

impl MetricSpec {
    pub fn recall(n: usize, m: f64) -> Self {
        MetricSpec {
            n,
            kind: MetricKind::RecallAt(m),
        }
    }

    pub fn mean_iou(n: usize) -> Self {
        MetricSpec {
            n,
            kind: MetricKind::MeanIou,
        }
    }

    /// CSV-safe column name, e.g. `r1_iou_0.5` or `r5_miou`.
    pub fn column_name(&self) -> String {
        match self.kind {
            MetricKind::RecallAt(m) => format!("r{}_iou_{}", self.n, m),
            MetricKind::MeanIou => format!("r{}_miou", self.n),
        }
    }

    pub fn evaluate(&self, samples: &[EvalSample], mode: ThresholdMode) -> Result<f64> {
        match self.kind {
            MetricKind::RecallAt(m) => recall_at(samples, self.n, m, mode),
            MetricKind::MeanIou => mean_iou_at(samples, self.n),
        }
    }
}

impl std::fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            MetricKind::RecallAt(m) => write!(f, "R@{},IoU={}", self.n, m),
            MetricKind::MeanIou => write!(f, "R@{},mIoU", self.n),
        }
    }
}

/// A batch of metric values over one sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    sample_count: usize,
    entries: Vec<(MetricSpec, f64)>,
}

impl EvalReport {
    pub fn compute(
        samples: &[EvalSample],
        specs: &[MetricSpec],
        mode: ThresholdMode,
    ) -> Result<Self> {
        let entries = specs
            .iter()
            .map(|spec| Ok((*spec, spec.evaluate(samples, mode)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(EvalReport {
            sample_count: samples.len(),
            entries,
        })
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    pub fn entries(&self) -> &[(MetricSpec, f64)] {
        &self.entries
    }

    pub fn get(&self, spec: &MetricSpec) -> Option<f64> {
        self.entries
            .iter()
            .find(|(s, _)| s == spec)
            .map(|(_, v)| *v)
    }
}
