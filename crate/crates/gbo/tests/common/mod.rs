//! Shared synthetic fixtures for integration tests.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gbo::cli::samples::{GroundTruth, ProposalEntry, SampleRecord};
use gbo::mixture::MixtureComponent;
use gbo::proposals::KernelKind;

/// Deterministic sample set: mixed kernel kinds, some mixture proposals,
/// losses everywhere, ground truth loosely anchored to the first proposal so
/// metric curves actually move as the penalty weight changes.
pub fn synthetic_samples(seed: u64, count: usize) -> Vec<SampleRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let duration = rng.gen_range(20.0..120.0f64);
            let n_props = rng.gen_range(3..=6);
            let proposals: Vec<ProposalEntry> = (0..n_props)
                .map(|_| {
                    let center = rng.gen_range(0.15..0.85f64);
                    let width = rng.gen_range(0.05..0.5f64);
                    let loss = rng.gen_range(0.0..1.0f64);
                    if rng.gen_bool(0.25) {
                        let components = (0..rng.gen_range(2..=3))
                            .map(|_| MixtureComponent {
                                center: rng.gen_range(0.15..0.85),
                                width: rng.gen_range(0.05..0.3),
                            })
                            .collect();
                        ProposalEntry {
                            kind: KernelKind::Gauss,
                            center,
                            width,
                            components: Some(components),
                            loss: Some(loss),
                        }
                    } else {
                        let kind = KernelKind::ALL[rng.gen_range(0..KernelKind::ALL.len())];
                        ProposalEntry {
                            kind,
                            center,
                            width,
                            components: None,
                            loss: Some(loss),
                        }
                    }
                })
                .collect();
            let anchor = proposals[0].center + rng.gen_range(-0.1..0.1);
            let gt_center = anchor.clamp(0.1, 0.9);
            let gt_half = rng.gen_range(0.02..0.12f64);
            let ground_truth = GroundTruth {
                start_sec: (gt_center - gt_half).max(0.0) * duration,
                end_sec: (gt_center + gt_half).min(1.0) * duration,
            };
            SampleRecord {
                id: format!("sample-{i:04}"),
                duration_sec: duration,
                proposals,
                ground_truth: Some(ground_truth),
            }
        })
        .collect()
}

pub fn to_jsonl(samples: &[SampleRecord]) -> String {
    let mut out = String::new();
    for sample in samples {
        out.push_str(&serde_json::to_string(sample).unwrap());
        out.push('\n');
    }
    out
}

pub fn write_jsonl(
    dir: &std::path::Path,
    name: &str,
    samples: &[SampleRecord],
) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, to_jsonl(samples)).unwrap();
    path
}

/// Path of the compiled `gbo` binary.
pub fn gbo_bin() -> &'static str {
    env!("CARGO_BIN_EXE_gbo")
}
