//! `zetadim`: generate point sets, estimate their large-scale dimensions,
//! search for arithmetic patches and report on the guarantees.
//!
//! Exit codes: 0 success, 1 patch not found or witness invalid, 2 data
//! error, 64 usage error.

mod cache;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_NOT_FOUND: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

/// Error in how the tool was invoked, reported with exit code 64.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Parser, Debug)]
#[command(name = "zetadim", version, about = "Large-scale dimensions and arithmetic patches of discrete point sets")]
pub struct Cli {
    /// Configuration file of key=value lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cache directory (overrides ZETADIM_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Increase log verbosity.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a point set and write it to a point file.
    Generate(GenerateArgs),
    /// Estimate dimensions of a point file.
    Estimate(EstimateArgs),
    /// Search a point file for a (k, ε, e)-AP.
    Patch(PatchArgs),
    /// Check a witness file against a point file.
    Verify(VerifyArgs),
    /// Threshold, series evidence and patch outcome for (k, ε, m).
    Report(ReportArgs),
    /// Inspect or clear the cache of generated sets.
    Cache(CacheArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetName {
    Lattice,
    Primes,
    Superprimes,
    Gaussian,
    Quadratic,
    Power,
    Blocks,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    pub set: SetName,
    /// Upper bound N on values (primes, superprimes, power, blocks).
    #[arg(long)]
    pub limit: Option<f64>,
    /// Radius R (lattice, gaussian, quadratic).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Lattice dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Exponent of the power set {n^α}.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// α is a root of x² − trace·x + norm (quadratic).
    #[arg(long, allow_hyphen_values = true)]
    pub trace: Option<i64>,
    #[arg(long)]
    pub norm: Option<i64>,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Point format; defaults to the output extension.
    #[arg(long)]
    pub format: Option<FormatArg>,
    /// Regenerate even if a cached copy exists.
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Zeta,
    Box,
    Abscissa,
    Assouad,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// start:end[:ratio] radii (box mode: start:floor, decreasing).
    #[arg(long)]
    pub ladder: Option<String>,
    /// Cover scale r; defaults to half the separation.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub window: Option<usize>,
    /// Base point as comma-separated coordinates; defaults to the origin.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// Step of the sigma grid (abscissa mode).
    #[arg(long)]
    pub sigma_step: Option<f64>,
    /// Sampled centers (assouad mode).
    #[arg(long)]
    pub centers: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write two-column plot data (log scale, log count) here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PatchArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Number of standard basis directions; defaults to the dimension.
    #[arg(long)]
    pub m: Option<usize>,
    /// Orientation vectors, e.g. "1,0;0,1".
    #[arg(long, allow_hyphen_values = true)]
    pub orientation: Option<String>,
    /// Scale ladder min:max[:ratio].
    #[arg(long)]
    pub ladder: Option<String>,
    /// Skip scales suggested by point pairs.
    #[arg(long)]
    pub no_pairs: bool,
    /// Write the witness here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub patch: PathBuf,
    pub points: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Series ladder start:end[:ratio].
    #[arg(long)]
    pub ladder: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    List,
    Clear,
    Path,
}

#[derive(Args, Debug)]
pub struct CacheArgs {
    pub action: CacheAction,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        EXIT_USAGE
    } else {
        EXIT_DATA
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
