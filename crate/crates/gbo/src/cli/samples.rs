//! JSON Lines input/output records.
//!
//! One sample per line. Proposals arrive with normalized center/width;
//! ground truth and emitted segments are in seconds, converted with the
//! sample's duration.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cli::CliError;
use crate::mixture::MixtureComponent;
use crate::proposals::KernelKind;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProposalEntry {
    pub kind: KernelKind,
    pub center: f64,
    pub width: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<MixtureComponent>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GroundTruth {
    pub start_sec: f64,
    pub end_sec: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRecord {
    pub id: String,
    pub duration_sec: f64,
    pub proposals: Vec<ProposalEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<GroundTruth>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ScoredSegment {
    pub start_sec: f64,
    pub end_sec: f64,
    pub score: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PredictionRecord {
    pub id: String,
    pub segments: Vec<ScoredSegment>,
}

pub fn read_samples(path: &Path) -> Result<Vec<SampleRecord>, CliError> {
    read_jsonl(path, |record: SampleRecord, line_no| {
        validate_sample(&record, line_no)?;
        Ok(record)
    })
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRecord>, CliError> {
    read_jsonl(path, |record: PredictionRecord, line_no| {
        for seg in &record.segments {
            if !seg.start_sec.is_finite() || !seg.end_sec.is_finite() || seg.start_sec > seg.end_sec
            {
                return Err(CliError::data(format!(
                    "{}: line {line_no}: prediction `{}` has invalid segment [{}, {}]",
                    path_str(path),
                    record.id,
                    seg.start_sec,
                    seg.end_sec
                )));
            }
        }
        Ok(record)
    })
}

fn read_jsonl<T, F>(path: &Path, validate: F) -> Result<Vec<T>, CliError>
where
    T: for<'de> Deserialize<'de>,
    F: Fn(T, usize) -> Result<T, CliError>,
{
    let file = File::open(path)
        .map_err(|e| CliError::data(format!("cannot open {}: {e}", path_str(path))))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line =
            line.map_err(|e| CliError::data(format!("{}: line {line_no}: {e}", path_str(path))))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: T = serde_json::from_str(&line)
            .map_err(|e| CliError::data(format!("{}: line {line_no}: {e}", path_str(path))))?;
        records.push(validate(record, line_no)?);
    }
    Ok(records)
}

fn validate_sample(record: &SampleRecord, line_no: usize) -> Result<(), CliError> {
    let fail = |msg: String| {
        Err(CliError::data(format!(
            "line {line_no}: sample `{}`: {msg}",
            record.id
        )))
    };
    if !record.duration_sec.is_finite() || record.duration_sec <= 0.0 {
        return fail(format!(
            "duration_sec must be positive, got {}",
            record.duration_sec
        ));
    }
    for (i, p) in record.proposals.iter().enumerate() {
        if !p.center.is_finite() || !(0.0..=1.0).contains(&p.center) {
            return fail(format!("proposal {i}: center {} outside [0, 1]", p.center));
        }
        if !p.width.is_finite() || p.width <= 0.0 {
            return fail(format!("proposal {i}: width {} must be positive", p.width));
        }
        if let Some(loss) = p.loss {
            if !loss.is_finite() || loss < 0.0 {
                return fail(format!("proposal {i}: loss {loss} must be nonnegative"));
            }
        }
        if let Some(components) = &p.components {
            if p.kind != KernelKind::Gauss {
                return fail(format!(
                    "proposal {i}: components require kind \"gauss\", got \"{}\"",
                    p.kind
                ));
            }
            if components.is_empty() {
                return fail(format!("proposal {i}: components must not be empty"));
            }
            for (j, comp) in components.iter().enumerate() {
                if !comp.center.is_finite() || !(0.0..=1.0).contains(&comp.center) {
                    return fail(format!(
                        "proposal {i}: component {j}: center {} outside [0, 1]",
                        comp.center
                    ));
                }
                if !comp.width.is_finite() || comp.width <= 0.0 {
                    return fail(format!(
                        "proposal {i}: component {j}: width {} must be positive",
                        comp.width
                    ));
                }
            }
        }
    }
    if let Some(gt) = &record.ground_truth {
        let ok = gt.start_sec.is_finite()
            && gt.end_sec.is_finite()
            && 0.0 <= gt.start_sec
            && gt.start_sec <= gt.end_sec
            && gt.end_sec <= record.duration_sec;
        if !ok {
            return fail(format!(
                "ground truth [{}, {}] must satisfy 0 <= start <= end <= duration ({})",
                gt.start_sec, gt.end_sec, record.duration_sec
            ));
        }
    }
    Ok(())
}

pub fn path_str(path: &Path) -> String {
    path.display().to_string()
}
