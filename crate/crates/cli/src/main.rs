//! Command-line front end: cone diagnostics, curvature scans, Dirichlet
//! solves, staged exhaustion runs, and the bundled verification suites, all
//! as one static binary. Numeric output goes through the library's 17-digit
//! float formatting, so a rerun of the same configuration reproduces every
//! file byte for byte.
//!
//! Exit codes: 0 on success, 1 for failed verification checks or an output
//! write that did not land, 2 for usage and configuration errors, 3 when a
//! solve or staged run did not reach a converged end state.

mod config;
mod commands;

use clap::{Parser, Subcommand};
use thiserror::Error;

/// Environment variable naming the default output root directory.
pub const OUTPUT_ROOT_VAR: &str = "SIGMA_YAMABE_OUTPUT_ROOT";

#[derive(Debug, Error)]
pub enum CliError {
    /// Configuration or usage rejected before any computation.
    #[error("{0}")]
    Config(String),

    /// A solve or staged run started but did not reach a converged state.
    #[error("{0}")]
    Infeasible(String),

    /// Verification checks ran and some failed.
    #[error("{0}")]
    Check(String),

    /// Reading input or writing output files failed.
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) | CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "sigma-yamabe",
    about = "Fully nonlinear curvature equations on radial backgrounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cone diagnostics: critical ratio, membership, deformation.
    Cone(commands::cone::ConeArgs),
    /// Curvature scan of a radial metric, as CSV.
    Curvature(commands::curvature::CurvatureArgs),
    /// One Dirichlet solve from a configuration file.
    Solve(commands::solve::SolveArgs),
    /// Staged exhaustion runs from configuration files.
    Exhaust(commands::exhaust::ExhaustArgs),
    /// Built-in verification suites.
    Verify(commands::verify::VerifyArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Cone(args) => commands::cone::run(args),
        Command::Curvature(args) => commands::curvature::run(args),
        Command::Solve(args) => commands::solve::run(args),
        Command::Exhaust(args) => commands::exhaust::run(args),
        Command::Verify(args) => commands::verify::run(args),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
