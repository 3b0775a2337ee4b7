//! Batch command-line front end.
//!
//! Subcommands: `optimize` (proposals to segments), `sweep` (metrics over a
//! penalty-weight grid), `eval` (score predictions against ground truth),
//! `verify` (closed forms against the grid oracle), and `correlate`
//! (Pearson correlation between sweep CSVs).
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification
//! failure.

pub mod correlate;
pub mod eval;
pub mod optimize;
pub mod samples;
pub mod sweep;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::metrics::ThresholdMode;
use crate::mixture::WidthConvention;
use crate::selection::SelectionStrategy;

/// Fixed penalty weights reproducing the published per-dataset settings.
pub const LAMBDA_PRESETS: &[(&str, f64)] = &[
    ("charades_cnm", 0.919),
    ("charades_cpl", 0.886),
    ("charades_pps", 0.883),
    ("anet_cnm", 0.938),
    ("anet_cpl", 0.909),
    ("anet_pps", 0.904),
];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError::Data(message.into())
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gbo",
    version,
    about = "Optimal segment boundaries from temporal proposals, plus evaluation tooling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert each sample's proposals into ranked segment predictions
    Optimize(OptimizeArgs),
    /// Evaluate metrics across a grid of penalty weights, emitting CSV
    Sweep(SweepArgs),
    /// Score a prediction file against ground truth
    Eval(EvalArgs),
    /// Check the closed-form solvers against the brute-force grid oracle
    Verify(VerifyArgs),
    /// Pearson correlation between the metric columns of two sweep CSVs
    Correlate(CorrelateArgs),
}

#[derive(clap::Args, Debug)]
pub struct OptimizeArgs {
    /// Input samples, JSON Lines
    pub input: PathBuf,
    /// Penalty weight (>= 0)
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Named penalty preset (charades_cnm, charades_cpl, charades_pps,
    /// anet_cnm, anet_cpl, anet_pps); alternative to --lambda
    #[arg(long, conflicts_with = "lambda")]
    pub preset: Option<String>,
    /// Ranking strategy: only_loss, only_iou, iou_loss_sum, iou_loss_max
    #[arg(long, default_value = "only_iou")]
    pub select: SelectionStrategy,
    /// Mixture width convention: raw (effective width is the Gaussian std
    /// dev) or divided (effective width / sigma_gauss)
    #[arg(long, default_value = "raw")]
    pub sigma_convention: WidthConvention,
    /// Worker threads (default: available cores)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output path (default: stdout)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct SweepArgs {
    /// Input samples, JSON Lines; ground truth required
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.001)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1.000)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 0.001)]
    pub lambda_step: f64,
    /// Ranking strategy for ordering predictions
    #[arg(long, default_value = "only_iou")]
    pub select: SelectionStrategy,
    #[arg(long, default_value = "raw")]
    pub sigma_convention: WidthConvention,
    /// Threshold comparison: strict (tIoU > m) or inclusive (tIoU >= m)
    #[arg(long, default_value = "strict")]
    pub threshold_mode: ThresholdMode,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output CSV path (default: stdout)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct EvalArgs {
    /// Input samples, JSON Lines; ground truth required
    pub input: PathBuf,
    /// Predictions, JSON Lines ({id, segments:[{start_sec,end_sec,score}]})
    pub predictions: PathBuf,
    /// Rank depths to report
    #[arg(long, value_delimiter = ',', default_value = "1,5")]
    pub n: Vec<usize>,
    /// IoU thresholds to report
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.7")]
    pub m: Vec<f64>,
    #[arg(long, default_value = "strict")]
    pub threshold_mode: ThresholdMode,
    /// Also write the report as CSV to this path
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    /// RNG seed for trial generation
    #[arg(long, default_value_t = 20250601)]
    pub seed: u64,
    /// Number of random trials (>= 1)
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Oracle grid step
    #[arg(long, default_value_t = 1e-4)]
    pub grid_step: f64,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(clap::Args, Debug)]
pub struct CorrelateArgs {
    /// First sweep CSV
    pub left: PathBuf,
    /// Second sweep CSV
    pub right: PathBuf,
    /// Metric columns to correlate (default: all shared non-lambda columns)
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,
}

/// Parse arguments and dispatch; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Optimize(args) => optimize::cmd_optimize(&args).map(|()| 0),
        Command::Sweep(args) => sweep::cmd_sweep(&args).map(|()| 0),
        Command::Eval(args) => eval::cmd_eval(&args).map(|()| 0),
        Command::Verify(args) => verify::cmd_verify(&args),
        Command::Correlate(args) => correlate::cmd_correlate(&args).map(|()| 0),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.exit_code()
        }
    }
}

/// Resolve --lambda / --preset into a concrete penalty weight.
pub fn resolve_lambda(lambda: Option<f64>, preset: Option<&str>) -> Result<f64, CliError> {
    match (lambda, preset) {
        (Some(l), None) => {
            if !l.is_finite() || l < 0.0 {
                Err(CliError::usage(format!(
                    "--lambda must be nonnegative and finite, got {l}"
                )))
            } else {
                Ok(l)
            }
        }
        (None, Some(name)) => LAMBDA_PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, l)| *l)
            .ok_or_else(|| {
                let names: Vec<&str> = LAMBDA_PRESETS.iter().map(|(n, _)| *n).collect();
                CliError::usage(format!(
                    "unknown preset `{name}`; expected one of {}",
                    names.join(", ")
                ))
            }),
        (None, None) => Err(CliError::usage("one of --lambda or --preset is required")),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    }
}

/// Run a closure inside a rayon pool of the requested size (current-thread
/// default pool when unset).
pub(crate) fn run_in_pool<T, F>(workers: Option<usize>, f: F) -> Result<T, CliError>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::usage("--workers must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::data(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Write to the given path, or stdout when unset.
pub(crate) fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::data(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| CliError::data(format!("cannot write to stdout: {e}"))),
    }
}

/// Format with at most six significant decimal digits, trailing zeros
/// trimmed (`50`, `33.3333`, `0.123457`).
pub fn format_sig6(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i32;
    let factor = 10f64.powi(5 - magnitude);
    let rounded = (value * factor).round() / factor;
    format!("{rounded}")
}
