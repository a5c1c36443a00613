//! The `su2ent` command line.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 verification failure, 3 I/O error.

mod commands;
pub mod formats;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::measures::MeasureKind;
use crate::oracle::OptimizerConfig;
use crate::spin_algebra::{parse_fraction, Spin};

pub use commands::{figure1_grid, figure_rows, SweepSpec, VerifyTarget, FIGURE_SPINS};
pub use formats::{format_number, StateFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "su2ent", version, about = "Entanglement of rotationally symmetric spin-j x spin-1/2 states")]
pub struct Cli {
    /// Report entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,

    /// Seed for every random choice (optimizer restarts, Monte Carlo, random states).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Override the acceptance tolerance of `verify`.
    #[arg(long, global = true, value_parser = parse_positive)]
    pub tol: Option<f64>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate measures of ρ(p) at one point.
    Eval(EvalArgs),
    /// Tabulate measures of ρ(p) on a uniform p grid.
    Sweep(SweepArgs),
    /// Emit the data behind figure 1 (log ε'') or figure 2 (E_F).
    Figure(FigureArgs),
    /// Compare closed forms with the numerical oracles.
    Verify(VerifyArgs),
    /// Project a state onto the rotation-invariant states.
    Twirl(TwirlArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Spin j, as a fraction ("3/2") or decimal.
    #[arg(long)]
    pub j: Spin,
    /// Overlap with the lower multiplet, in [0, 1]; fractions allowed.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub p: f64,
    /// Comma-separated measures (default: all).
    #[arg(long, value_delimiter = ',')]
    pub measure: Vec<MeasureKind>,
    /// Compute with the numerical oracles instead of the closed forms.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub j: Spin,
    #[arg(long, value_parser = parse_real, default_value = "0", allow_hyphen_values = true)]
    pub p_min: f64,
    #[arg(long, value_parser = parse_real, default_value = "1", allow_hyphen_values = true)]
    pub p_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[arg(long, value_delimiter = ',', default_value = "eof")]
    pub measure: Vec<MeasureKind>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// 1 or 2.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
    /// Grid size for figure 2.
    #[arg(long, default_value_t = 201)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub j: Spin,
    /// Comma-separated p values (eof, epsilon, roof).
    #[arg(long, value_delimiter = ',', value_parser = parse_real, allow_hyphen_values = true)]
    pub p: Vec<f64>,
    /// Comma-separated μ values (pmu).
    #[arg(long, value_delimiter = ',', value_parser = parse_real, allow_hyphen_values = true)]
    pub mu: Vec<f64>,
    #[arg(long, value_enum)]
    pub target: VerifyTarget,
    /// Convex roof to check with `--target roof`.
    #[arg(long, default_value = "eof")]
    pub measure: MeasureKind,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long, value_parser = parse_positive)]
    pub convergence_tol: Option<f64>,
    /// Ensemble size for convex-roof searches (default rank²).
    #[arg(long)]
    pub n_terms: Option<usize>,
}

impl OptimizerArgs {
    pub fn config(&self, seed: u64) -> OptimizerConfig {
        let d = OptimizerConfig::default();
        OptimizerConfig {
            restarts: self.restarts.unwrap_or(d.restarts),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            convergence_tol: self.convergence_tol.unwrap_or(d.convergence_tol),
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builder {
    #[value(name = "rho_p")]
    RhoP,
    Chi,
    Phi,
    Random,
}

#[derive(Debug, Args)]
pub struct TwirlArgs {
    /// State file to twirl.
    #[arg(long, conflicts_with = "state", required_unless_present = "state")]
    pub input: Option<PathBuf>,
    /// Named state to twirl instead of a file.
    #[arg(long, value_enum)]
    pub state: Option<Builder>,
    #[arg(long)]
    pub j1: Spin,
    #[arg(long, default_value = "1/2")]
    pub j2: Spin,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Haar samples for the Monte Carlo estimate (0 skips it).
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    /// Where to write the Monte Carlo estimate as a state file.
    #[arg(long)]
    pub mc_out: Option<PathBuf>,
}

fn parse_real(s: &str) -> Result<f64, String> {
    parse_fraction(s).map_err(|e| e.to_string())
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let x = parse_real(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{s} is not positive"))
    }
}

/// Outcome of a successfully executed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

/// Parse `args` (including the program name), execute, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match commands::execute(&cli) {
        Ok(Outcome::Success) => EXIT_OK,
        Ok(Outcome::VerificationFailed) => EXIT_VERIFY_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
