//! `eval`: score a prediction file against ground truth.

use std::collections::HashMap;

use crate::cli::samples::{PredictionRecord, SampleRecord};
use crate::cli::{format_sig6, write_output, CliError, EvalArgs};
use crate::metrics::{EvalReport, EvalSample, MetricSpec};
use crate::solver::Segment;

pub fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let specs = build_specs(&args.n, &args.m)?;
    let samples = crate::cli::samples::read_samples(&args.input)?;
    if samples.is_empty() {
        return Err(CliError::data(format!(
            "{}: no samples",
            args.input.display()
        )));
    }
    let predictions = crate::cli::samples::read_predictions(&args.predictions)?;
    if predictions.is_empty() {
        return Err(CliError::data(format!(
            "{}: no predictions",
            args.predictions.display()
        )));
    }
    let eval_samples = pair_up(&samples, &predictions)?;
    let report = EvalReport::compute(&eval_samples, &specs, args.threshold_mode)
        .map_err(|e| CliError::data(e.to_string()))?;
    print_table(&report);
    if args.output.is_some() {
        let mut csv = String::from("metric,value\n");
        for (spec, value) in report.entries() {
            csv.push_str(&format!("{},{}\n", spec.column_name(), format_sig6(*value)));
        }
        write_output(args.output.as_ref(), &csv)?;
    }
    Ok(())
}

fn build_specs(ns: &[usize], ms: &[f64]) -> Result<Vec<MetricSpec>, CliError> {
    if ns.is_empty() {
        return Err(CliError::usage("--n needs at least one rank depth"));
    }
    let mut specs = Vec::new();
    for &n in ns {
        if n == 0 {
            return Err(CliError::usage("--n values must be at least 1"));
        }
        for &m in ms {
            if !(m > 0.0 && m < 1.0) {
                return Err(CliError::usage(format!(
                    "--m values must lie strictly inside (0, 1), got {m}"
                )));
            }
            specs.push(MetricSpec::recall(n, m));
        }
        specs.push(MetricSpec::mean_iou(n));
    }
    Ok(specs)
}

/// Match predictions to samples by id (both directions must cover exactly),
/// clip predicted segments to the video, and keep sample order.
fn pair_up(
    samples: &[SampleRecord],
    predictions: &[PredictionRecord],
) -> Result<Vec<EvalSample>, CliError> {
    let mut by_id: HashMap<&str, &PredictionRecord> = HashMap::new();
    for record in predictions {
        if by_id.insert(record.id.as_str(), record).is_some() {
            return Err(CliError::data(format!(
                "duplicate prediction id `{}`",
                record.id
            )));
        }
    }
    let mut seen_samples: std::collections::HashSet<&str> = std::collections::HashSet::new();
    for sample in samples {
        if !seen_samples.insert(sample.id.as_str()) {
            return Err(CliError::data(format!(
                "duplicate sample id `{}`",
                sample.id
            )));
        }
    }
    let missing_gt: Vec<&str> = samples
        .iter()
        .filter(|s| s.ground_truth.is_none())
        .map(|s| s.id.as_str())
        .collect();
    if !missing_gt.is_empty() {
        return Err(CliError::data(format!(
            "missing ground truth for samples: {}",
            missing_gt.join(", ")
        )));
    }
    let mut eval_samples = Vec::with_capacity(samples.len());
    for sample in samples {
        let record = by_id
            .remove(sample.id.as_str())
            .ok_or_else(|| CliError::data(format!("no prediction for sample `{}`", sample.id)))?;
        if record.segments.is_empty() {
            return Err(CliError::data(format!(
                "prediction for sample `{}` has no segments",
                sample.id
            )));
        }
        let gt = sample.ground_truth.as_ref().expect("checked above");
        let ground_truth = Segment::new(gt.start_sec, gt.end_sec)
            .map_err(|e| CliError::data(format!("sample `{}`: {e}", sample.id)))?;
        let predictions = record
            .segments
            .iter()
            .map(|s| {
                Segment::new(s.start_sec, s.end_sec)
                    .map(|seg| seg.clip(0.0, sample.duration_sec))
                    .map_err(|e| CliError::data(format!("sample `{}`: {e}", sample.id)))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        eval_samples.push(EvalSample::new(predictions, ground_truth));
    }
    if !by_id.is_empty() {
        let mut extra: Vec<&str> = by_id.keys().copied().collect();
        extra.sort_unstable();
        return Err(CliError::data(format!(
            "predictions reference unknown sample ids: {}",
            extra.join(", ")
        )));
    }
    Ok(eval_samples)
}

fn print_table(report: &EvalReport) {
    println!("{:<16} value", "metric");
    for (spec, value) in report.entries() {
        println!("{:<16} {}", spec.to_string(), format_sig6(*value));
    }
    println!("{:<16} {}", "samples", report.sample_count());
}
