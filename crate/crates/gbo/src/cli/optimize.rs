//! `optimize`: proposals in, ranked segment predictions out.

use rayon::prelude::*;

use crate::cli::samples::{PredictionRecord, SampleRecord, ScoredSegment};
use crate::cli::{resolve_lambda, run_in_pool, write_output, CliError, OptimizeArgs};
use crate::mixture::{solve_mixture, MixtureProposal, WidthConvention};
use crate::proposals::{ProposalKernel, ScaleConstants};
use crate::selection::{rank, SelectionStrategy};
use crate::solver::{solve_levelset, PenaltyWeight, Segment};

pub struct OptimizeOptions {
    pub lambda: PenaltyWeight,
    pub strategy: SelectionStrategy,
    pub convention: WidthConvention,
    pub scales: ScaleConstants,
}

pub fn cmd_optimize(args: &OptimizeArgs) -> Result<(), CliError> {
    let lambda = resolve_lambda(args.lambda, args.preset.as_deref())?;
    let options = OptimizeOptions {
        lambda: PenaltyWeight::new(lambda)
            .map_err(|e| CliError::usage(format!("invalid --lambda: {e}")))?,
        strategy: args.select,
        convention: args.sigma_convention,
        scales: ScaleConstants::default(),
    };
    let samples = samples_from(args)?;
    let predictions = run_in_pool(args.workers, || {
        samples
            .par_iter()
            .map(|sample| optimize_sample(sample, &options))
            .collect::<Result<Vec<_>, CliError>>()
    })??;
    let mut out = String::new();
    for record in &predictions {
        out.push_str(&serde_json::to_string(record).expect("prediction serializes"));
        out.push('\n');
    }
    write_output(args.output.as_ref(), &out)
}

fn samples_from(args: &OptimizeArgs) -> Result<Vec<SampleRecord>, CliError> {
    crate::cli::samples::read_samples(&args.input)
}

/// Optimize one sample: solve every proposal, clip to the timeline, rank,
/// and convert to seconds. Output order is the ranking order; determinism
/// follows from the math being pure.
pub fn optimize_sample(
    sample: &SampleRecord,
    options: &OptimizeOptions,
) -> Result<PredictionRecord, CliError> {
    let fail = |msg: String| CliError::data(format!("sample `{}`: {msg}", sample.id));
    if sample.proposals.is_empty() {
        return Err(fail("has no proposals".into()));
    }
    let mut ranked_input: Vec<(Segment, Option<f64>)> = Vec::with_capacity(sample.proposals.len());
    for (i, proposal) in sample.proposals.iter().enumerate() {
        let segment = if let Some(components) = &proposal.components {
            let mixture = MixtureProposal::new(components.clone())
                .map_err(|e| fail(format!("proposal {i}: {e}")))?;
            solve_mixture(
                &mixture,
                &options.scales,
                options.lambda,
                options.convention,
            )
            .map_err(|e| fail(format!("proposal {i}: {e}")))?
            .segment
        } else {
            let kernel = ProposalKernel::new(proposal.kind, proposal.center, proposal.width)
                .map_err(|e| fail(format!("proposal {i}: {e}")))?;
            solve_levelset(&kernel, &options.scales, options.lambda)
                .segment
                .clip(0.0, 1.0)
        };
        ranked_input.push((segment, proposal.loss));
    }
    let ranked = rank(&ranked_input, options.strategy).map_err(|e| fail(e.to_string()))?;
    let segments = ranked
        .items()
        .iter()
        .map(|(seg, score)| ScoredSegment {
            start_sec: seg.start() * sample.duration_sec,
            end_sec: seg.end() * sample.duration_sec,
            score: *score,
        })
        .collect();
    Ok(PredictionRecord {
        id: sample.id.clone(),
        segments,
    })
}
