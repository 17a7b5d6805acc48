//! Command-line front end for the disc-winding stationary law.
//!
//! Five commands cover the three computation routes and their
//! cross-checks: `asymptotic` (closed form), `solve` (eigenproblem),
//! `simulate` (direct paths), `action` (functional scoring and minimality
//! probes), and `verify` (the property gate). Every command is a pure
//! function of its resolved configuration and seed.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConstantChoice, Format, Source};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, bad config file, or parameters violating a precondition.
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// A solver ran out of budget or lost its bracket.
    #[error("{0}")]
    Numerics(windisc_core::Error),
    #[error("verification failed: {failed} gated check(s), see {report}")]
    Verification { failed: usize, report: PathBuf },
}

impl From<windisc_core::Error> for CliError {
    fn from(err: windisc_core::Error) -> Self {
        match err {
            windisc_core::Error::Input(msg) => CliError::Config(msg),
            other => CliError::Numerics(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerics(_) => 3,
            CliError::Verification { .. } => 4,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "windisc",
    version,
    about = "Stationary density of a Brownian particle orbiting a hard disc, three ways",
    after_help = "Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence, 4 verification failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form strip density, its constants, and the winding-constant report.
    Asymptotic(AsymptoticArgs),
    /// Self-consistent eigenproblem solution plus a comparison against the closed form.
    Solve(SolveArgs),
    /// Direct path simulation checked against a computed law.
    Simulate(SimulateArgs),
    /// Action breakdown of a computed law and seeded minimality probes.
    Action(ActionArgs),
    /// Full property suite; exits 0 only if every gated check passes.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
pub struct CommonArgs {
    /// Disc radius R.
    #[arg(long = "R", value_name = "RADIUS")]
    radius: Option<f64>,
    /// Orbit speed V.
    #[arg(long = "V", value_name = "SPEED")]
    speed: Option<f64>,
    /// Diffusion constant D.
    #[arg(long = "D", value_name = "DIFFUSION")]
    diffusion: Option<f64>,
    /// Directory receiving the emitted files.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Format of tabular payloads; reports are always JSON.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Seed for every random stream in the run.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON configuration file; explicit flags override its entries.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct AsymptoticArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Winding constant entering the closed form.
    #[arg(long, value_enum)]
    constant: Option<ConstantChoice>,
    /// Node count of the emitted density grid.
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Internal nodes of the eigenproblem discretization.
    #[arg(long)]
    nodes: Option<usize>,
    /// Relative fixed-point tolerance on the winding constant.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Cap on winding fixed-point iterations.
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Comma-separated radii; emits one comparison row per radius instead
    /// of the single-run files.
    #[arg(long = "sweep-R", value_name = "R1,R2,...", value_delimiter = ',')]
    sweep_radii: Option<Vec<f64>>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Law the paths start from, drift along, and are compared against.
    #[arg(long, value_enum)]
    source: Option<Source>,
    /// Node count of the target-law grid.
    #[arg(long)]
    nodes: Option<usize>,
    /// Time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Steps per path, burn-in included.
    #[arg(long)]
    steps: Option<u64>,
    /// Number of independent paths.
    #[arg(long)]
    paths: Option<u64>,
    /// Leading steps per path excluded from the histogram.
    #[arg(long = "burn-in")]
    burn_in: Option<u64>,
    /// Histogram bins between the disc edge and the window end.
    #[arg(long)]
    bins: Option<usize>,
    /// Histogram window length in units of the strip width.
    #[arg(long = "window-widths")]
    window_widths: Option<f64>,
    /// Override for the drift clamp (defaults to a multiple of D over the
    /// strip width).
    #[arg(long = "drift-cap")]
    drift_cap: Option<f64>,
    /// KS distance at or below which the run is marked as passing.
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args)]
struct ActionArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Law being scored and probed.
    #[arg(long, value_enum)]
    source: Option<Source>,
    /// Node count of the law's grid.
    #[arg(long)]
    nodes: Option<usize>,
    /// Number of seeded perturbation probes.
    #[arg(long)]
    perturbations: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Internal nodes of the eigenproblem checks.
    #[arg(long)]
    nodes: Option<usize>,
    /// Number of seeded perturbation probes.
    #[arg(long)]
    perturbations: Option<usize>,
    /// Test hook: corrupt a known quantity so the gate must trip.
    #[arg(long = "inject-fault", value_enum)]
    inject_fault: Option<commands::verify::FaultMode>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Asymptotic(args) => commands::asymptotic::run(args),
        Command::Solve(args) => commands::solve::run(args),
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Action(args) => commands::action::run(args),
        Command::Verify(args) => commands::verify::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
