//! `wfsaw` command-line driver.
//!
//! Exit codes: 0 success, 1 validation failed (mc-check), 2 usage or input
//! error, 3 I/O error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod commands;
pub mod svg;
pub mod table;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    ValidationFailed(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ValidationFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<wfsaw_core::Error> for CliError {
    fn from(e: wfsaw_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wfsaw",
    version,
    about = "Combat team survivability curves and comparisons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Built-in preset name or path to a TOML scenario
    #[arg(long, default_value = wfsaw_core::scenario::PAPER_TABLE1)]
    pub scenario: String,

    /// Time grid override as start:end:step
    #[arg(long)]
    pub grid: Option<String>,

    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected survivability curves for one ranking, plus the LIMIT curve
    Eval {
        #[command(flatten)]
        common: ScenarioArgs,
        /// Ranking name (first ranking when omitted)
        #[arg(long)]
        ranking: Option<String>,
        /// Comma-separated team labels (all teams when omitted)
        #[arg(long)]
        teams: Option<String>,
        /// Team whose model layout defines the LIMIT curve
        #[arg(long)]
        limit_template: Option<String>,
    },
    /// Pairwise dominance verdicts for every ranking
    Compare {
        #[command(flatten)]
        common: ScenarioArgs,
        /// Restrict to one ranking
        #[arg(long)]
        ranking: Option<String>,
        /// Also write curves for every ranking to this CSV
        #[arg(long)]
        curves: Option<PathBuf>,
        #[arg(long)]
        limit_template: Option<String>,
        #[arg(long, default_value_t = wfsaw_core::saw::DEFAULT_TIE_TOL)]
        tie_tol: f64,
    },
    /// Check every closed-form mean against Monte Carlo estimates
    McCheck {
        #[command(flatten)]
        common: ScenarioArgs,
        /// Samples per estimate (scenario `mc.n` or 100000 when omitted)
        #[arg(long)]
        n: Option<u64>,
        /// Seed (scenario `mc.seed` or 0 when omitted)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Dominance of the first two teams across weight vectors
    Sweep {
        #[command(flatten)]
        common: ScenarioArgs,
        #[arg(long, value_enum, default_value_t = SweepMode::Rankings)]
        mode: SweepMode,
        /// Number of random weight vectors
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = wfsaw_core::saw::DEFAULT_TIE_TOL)]
        tie_tol: f64,
    },
    /// Render a curve CSV as an SVG line chart
    Plot {
        /// Curve table written by `eval`
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    Rankings,
    RandomSimplex,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match commands::execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("wfsaw: {e}");
            e.exit_code()
        }
    }
}
