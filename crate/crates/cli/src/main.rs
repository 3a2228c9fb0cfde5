//! `multicrit`: tables, checks and samples for multicritical Schur measures.
//!
//! Exit codes: 0 success, 1 numerical non-convergence, 2 validation
//! failure (including failed checks in `verify`), 64 usage error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use multicrit::{MeasureKind, ScalingConvention, Statistic};
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "multicrit", version, about = "Multicritical Schur measures: exact laws, edge limits and sampling")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default: $MULTICRIT_OUT_DIR/<command>.<ext>, else stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (default: csv for tables, json for reports).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeasureArgs {
    /// Measure family: `odd` or `oe`.
    #[arg(long, default_value = "odd", value_parser = parse_kind)]
    pub kind: MeasureKind,
    /// Criticality order n >= 1.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Overall scale θ >= 0, as a decimal or `p/q`.
    #[arg(long, default_value = "1")]
    pub theta: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact parameters of the measure as JSON.
    Params(MeasureArgs),
    /// P(λ₁ <= l) (or ℓ(λ) with --stat length) for l in [from, to].
    Gap(commands::GapArgs),
    /// Edge-scaled CDF P(stat <= ⌊center + s·scale⌋) next to F(order; s).
    Cdf(commands::CdfArgs),
    /// Table of the higher-order Tracy–Widom law F(order; s).
    DistTable(commands::DistTableArgs),
    /// Limiting density ρ and profile Ω.
    LimitShape(commands::LimitShapeArgs),
    /// Toeplitz, Fredholm, enumeration and Haar Monte Carlo side by side.
    ToeplitzCheck(commands::ToeplitzCheckArgs),
    /// Exact samples from the measure.
    Sample(commands::SampleArgs),
    /// Run the verification suite.
    Verify(commands::VerifyArgs),
}

fn parse_kind(s: &str) -> Result<MeasureKind, String> {
    s.parse().map_err(|e: multicrit::Error| e.to_string())
}

pub fn parse_stat(s: &str) -> Result<Statistic, String> {
    s.parse().map_err(|e: multicrit::Error| e.to_string())
}

pub fn parse_convention(s: &str) -> Result<ScalingConvention, String> {
    s.parse().map_err(|e: multicrit::Error| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(multicrit::Error),
    Output(String),
    ChecksFailed(usize),
}

impl CliError {
    pub fn io(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }

    pub fn csv(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }

    pub fn json(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        use multicrit::Error as E;
        match self {
            CliError::Usage(_) => 64,
            CliError::Library(E::NonConvergence { .. } | E::KernelInvariant(_)) => 1,
            CliError::Library(_) | CliError::Output(_) | CliError::ChecksFailed(_) => 2,
        }
    }
}

impl From<multicrit::Error> for CliError {
    fn from(e: multicrit::Error) -> Self {
        CliError::Library(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Output(m) => write!(f, "cannot write output: {m}"),
            CliError::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("usage error: --threads must be positive");
            return ExitCode::from(64);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let io = commands::Io {
        format: cli.format,
        out: cli.out,
    };
    let result = match cli.command {
        Command::Params(a) => commands::params(a, io),
        Command::Gap(a) => commands::gap(a, io),
        Command::Cdf(a) => commands::cdf(a, io),
        Command::DistTable(a) => commands::dist_table(a, io),
        Command::LimitShape(a) => commands::limit_shape(a, io),
        Command::ToeplitzCheck(a) => commands::toeplitz_check(a, io),
        Command::Sample(a) => commands::sample(a, io),
        Command::Verify(a) => commands::verify(a, io),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("multicrit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
