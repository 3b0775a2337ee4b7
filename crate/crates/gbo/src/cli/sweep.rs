//! `sweep`: metrics over a penalty-weight grid.
//!
//! One CSV row per weight, ascending; the per-metric argmax weights go to
//! stderr so the CSV stream stays clean. Rows are independent, so the grid
//! is processed in parallel and collected back in order.

use rayon::prelude::*;

use crate::cli::samples::SampleRecord;
use crate::cli::{format_sig6, run_in_pool, write_output, CliError, SweepArgs};
use crate::metrics::{EvalSample, MetricSpec, ThresholdMode};
use crate::mixture::{solve_mixture, MixtureProposal, WidthConvention};
use crate::proposals::{ProposalKernel, ScaleConstants};
use crate::selection::{rank, SelectionStrategy};
use crate::solver::{solve_levelset, PenaltyWeight, Segment};

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_step: f64,
    pub specs: Vec<MetricSpec>,
    pub strategy: SelectionStrategy,
    pub convention: WidthConvention,
    pub threshold_mode: ThresholdMode,
}

impl SweepConfig {
    /// R@{1,5} at IoU 0.5 and 0.7 plus mean IoU.
    pub fn default_specs() -> Vec<MetricSpec> {
        vec![
            MetricSpec::recall(1, 0.5),
            MetricSpec::recall(1, 0.7),
            MetricSpec::mean_iou(1),
            MetricSpec::recall(5, 0.5),
            MetricSpec::recall(5, 0.7),
            MetricSpec::mean_iou(5),
        ]
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            lambda_min: 0.001,
            lambda_max: 1.000,
            lambda_step: 0.001,
            specs: Self::default_specs(),
            strategy: SelectionStrategy::OnlyIoU,
            convention: WidthConvention::Raw,
            threshold_mode: ThresholdMode::Strict,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub values: Vec<f64>,
}

/// Upper bound on grid points, guarding against degenerate step sizes.
pub const GRID_BUDGET: usize = 10_000_000;

/// Ascending, inclusive grid `min, min + step, ..., max` (up to rounding of
/// the final point onto `max`).
pub fn lambda_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !min.is_finite() || !max.is_finite() || min < 0.0 || min > max {
        return Err(CliError::usage(format!(
            "need 0 <= lambda-min <= lambda-max, got {min} and {max}"
        )));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(CliError::usage(format!(
            "lambda-step must be positive, got {step}"
        )));
    }
    // the small epsilon keeps an exact final point on the grid despite
    // division rounding ((1.000 - 0.001) / 0.001 lands just below 999)
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    if count > GRID_BUDGET {
        return Err(CliError::usage(format!(
            "lambda grid of {count} points exceeds the budget of {GRID_BUDGET}"
        )));
    }
    Ok((0..count).map(|k| min + k as f64 * step).collect())
}

enum Prepared {
    Single(ProposalKernel),
    Mixture(MixtureProposal),
}

struct PreparedSample {
    duration: f64,
    ground_truth: Segment,
    proposals: Vec<(Prepared, Option<f64>)>,
}

fn prepare(samples: &[SampleRecord]) -> Result<Vec<PreparedSample>, CliError> {
    let missing: Vec<&str> = samples
        .iter()
        .filter(|s| s.ground_truth.is_none())
        .map(|s| s.id.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(CliError::data(format!(
            "missing ground truth for samples: {}",
            missing.join(", ")
        )));
    }
    samples
        .iter()
        .map(|sample| {
            let fail = |msg: String| CliError::data(format!("sample `{}`: {msg}", sample.id));
            if sample.proposals.is_empty() {
                return Err(fail("has no proposals".into()));
            }
            let gt = sample.ground_truth.as_ref().expect("checked above");
            let ground_truth =
                Segment::new(gt.start_sec, gt.end_sec).map_err(|e| fail(e.to_string()))?;
            let proposals = sample
                .proposals
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let prepared = if let Some(components) = &p.components {
                        Prepared::Mixture(
                            MixtureProposal::new(components.clone())
                                .map_err(|e| fail(format!("proposal {i}: {e}")))?,
                        )
                    } else {
                        Prepared::Single(
                            ProposalKernel::new(p.kind, p.center, p.width)
                                .map_err(|e| fail(format!("proposal {i}: {e}")))?,
                        )
                    };
                    Ok((prepared, p.loss))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(PreparedSample {
                duration: sample.duration_sec,
                ground_truth,
                proposals,
            })
        })
        .collect()
}

fn evaluate_at(
    prepared: &[PreparedSample],
    lambda: f64,
    config: &SweepConfig,
    scales: &ScaleConstants,
) -> Result<Vec<f64>, CliError> {
    let weight =
        PenaltyWeight::new(lambda).map_err(|e| CliError::usage(format!("invalid lambda: {e}")))?;
    let eval_samples = prepared
        .iter()
        .map(|sample| {
            let solved = sample
                .proposals
                .iter()
                .map(|(prepared, loss)| {
                    let segment = match prepared {
                        Prepared::Single(kernel) => solve_levelset(kernel, scales, weight)
                            .segment
                            .clip(0.0, 1.0),
                        Prepared::Mixture(mixture) => {
                            solve_mixture(mixture, scales, weight, config.convention)
                                .map_err(|e| CliError::data(e.to_string()))?
                                .segment
                        }
                    };
                    Ok((segment, *loss))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let ranked =
                rank(&solved, config.strategy).map_err(|e| CliError::data(e.to_string()))?;
            let predictions = ranked
                .items()
                .iter()
                .map(|(seg, _)| {
                    Segment::new(seg.start() * sample.duration, seg.end() * sample.duration)
                        .expect("scaled segment stays ordered")
                })
                .collect();
            Ok(EvalSample::new(predictions, sample.ground_truth))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    config
        .specs
        .iter()
        .map(|spec| {
            spec.evaluate(&eval_samples, config.threshold_mode)
                .map_err(|e| CliError::data(e.to_string()))
        })
        .collect()
}

/// Evaluate every metric at every grid point. Rows come back in grid order.
pub fn run_sweep(
    samples: &[SampleRecord],
    config: &SweepConfig,
) -> Result<Vec<SweepRow>, CliError> {
    let prepared = prepare(samples)?;
    let scales = ScaleConstants::default();
    let grid = lambda_grid(config.lambda_min, config.lambda_max, config.lambda_step)?;
    grid.par_iter()
        .map(|&lambda| {
            Ok(SweepRow {
                lambda,
                values: evaluate_at(&prepared, lambda, config, &scales)?,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow], specs: &[MetricSpec]) -> String {
    let mut out = String::from("lambda");
    for spec in specs {
        out.push(',');
        out.push_str(&spec.column_name());
    }
    out.push('\n');
    for row in rows {
        out.push_str(&format!("{:.3}", row.lambda));
        for value in &row.values {
            out.push(',');
            out.push_str(&format_sig6(*value));
        }
        out.push('\n');
    }
    out
}

/// Per metric, the smallest lambda attaining the column maximum.
pub fn argmax_summary(rows: &[SweepRow], specs: &[MetricSpec]) -> Vec<(String, f64, f64)> {
    specs
        .iter()
        .enumerate()
        .map(|(col, spec)| {
            let (best_lambda, best_value) = rows
                .iter()
                .map(|row| (row.lambda, row.values[col]))
                .fold((f64::NAN, f64::NEG_INFINITY), |acc, (l, v)| {
                    if v > acc.1 {
                        (l, v)
                    } else {
                        acc
                    }
                });
            (spec.column_name(), best_lambda, best_value)
        })
        .collect()
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let config = SweepConfig {
        lambda_min: args.lambda_min,
        lambda_max: args.lambda_max,
        lambda_step: args.lambda_step,
        specs: SweepConfig::default_specs(),
        strategy: args.select,
        convention: args.sigma_convention,
        threshold_mode: args.threshold_mode,
    };
    let samples = crate::cli::samples::read_samples(&args.input)?;
    if samples.is_empty() {
        return Err(CliError::data(format!(
            "{}: no samples",
            args.input.display()
        )));
    }
    let rows = run_in_pool(args.workers, || run_sweep(&samples, &config))??;
    let csv = sweep_csv(&rows, &config.specs);
    write_output(args.output.as_ref(), &csv)?;
    for (column, lambda, value) in argmax_summary(&rows, &config.specs) {
        eprintln!(
            "argmax {column}: lambda={lambda:.3} value={}",
            format_sig6(value)
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_exactly_one_thousand_points() {
        let grid = lambda_grid(0.001, 1.000, 0.001).unwrap();
        assert_eq!(grid.len(), 1000);
        assert!((grid[0] - 0.001).abs() < 1e-12);
        assert!((grid[999] - 1.000).abs() < 1e-9);
        for pair in grid.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(lambda_grid(-0.1, 1.0, 0.001).is_err());
        assert!(lambda_grid(0.5, 0.4, 0.001).is_err());
        assert!(lambda_grid(0.1, 0.9, 0.0).is_err());
        assert_eq!(lambda_grid(0.5, 0.5, 0.001).unwrap(), vec![0.5]);
        // degenerate step sizes are rejected before allocation
        assert!(lambda_grid(0.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn csv_layout() {
        let specs = vec![MetricSpec::recall(1, 0.5), MetricSpec::mean_iou(1)];
        let rows = vec![
            SweepRow {
                lambda: 0.001,
                values: vec![50.0, 100.0 / 3.0],
            },
            SweepRow {
                lambda: 0.002,
                values: vec![25.0, 10.0],
            },
        ];
        let csv = sweep_csv(&rows, &specs);
        assert_eq!(
            csv,
            "lambda,r1_iou_0.5,r1_miou\n0.001,50,33.3333\n0.002,25,10\n"
        );
    }

    #[test]
    fn argmax_picks_smallest_lambda_on_ties() {
        let specs = vec![MetricSpec::recall(1, 0.5)];
        let rows = vec![
            SweepRow {
                lambda: 0.1,
                values: vec![70.0],
            },
            SweepRow {
                lambda: 0.2,
                values: vec![70.0],
            },
            SweepRow {
                lambda: 0.3,
                values: vec![60.0],
            },
        ];
        let summary = argmax_summary(&rows, &specs);
        assert_eq!(summary[0].1, 0.1);
        assert_eq!(summary[0].2, 70.0);
    }
}
