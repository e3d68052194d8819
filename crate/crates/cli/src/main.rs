//! `mhdlab`: runs, dispersion maps, norms and checks from the command line.
//!
//! Exit codes: 0 success, 1 bad input (usage, config, missing files),
//! 2 a run that blew up or a check that failed.

mod besov;
mod linear_map;
mod manifest;
mod paraproduct;
mod simulate;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mhdlab::solver::{parse_real, ConfigError, SolverError};

#[derive(Parser, Debug)]
#[command(
    name = "mhdlab",
    version,
    about = "Pseudo-spectral 2D MHD with zero magnetic diffusivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the solver on a config file and write ledger, snapshots and manifest.
    Simulate(simulate::SimulateArgs),
    /// Write the eigenvalue map of the linearized system as CSV.
    LinearMap(linear_map::LinearMapArgs),
    /// Print Besov-type norms of the fields in a snapshot.
    Besov(besov::BesovArgs),
    /// Check the paraproduct reconstruction and measure product-law quotients.
    ParaproductCheck(paraproduct::ParaproductArgs),
    /// Replay the diagnostics of a finished run and check its bounds.
    Verify(RunDirArgs),
    /// Print the invariant maxima, dissipation budget and X(t) of a run.
    Report(RunDirArgs),
}

#[derive(Args, Debug)]
struct RunDirArgs {
    /// Output directory of a `simulate` run.
    run_dir: PathBuf,
}

/// Grid flags shared by subcommands that build their own grid.
#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Modes along x1.
    #[arg(long, default_value_t = 64)]
    pub n1: usize,
    /// Modes along x2.
    #[arg(long, default_value_t = 64)]
    pub n2: usize,
    /// Period along x1; plain number or multiple of pi.
    #[arg(long, default_value = "32pi", value_parser = parse_length)]
    pub l1: f64,
    /// Period along x2.
    #[arg(long, default_value = "32pi", value_parser = parse_length)]
    pub l2: f64,
}

impl GridArgs {
    pub fn grid(&self) -> Result<mhdlab::Grid, CliError> {
        mhdlab::Grid::new(self.n1, self.n2, self.l1, self.l2)
            .map_err(|e| CliError::Usage(format!("grid: {e}")))
    }
}

fn parse_length(raw: &str) -> Result<f64, String> {
    let v = parse_real(raw)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{raw:?} must be positive"))
    }
}

/// Errors that end a subcommand with exit code 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn file(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::File { path, source }
    }
}

/// Outcome of a subcommand that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Success => ExitCode::SUCCESS,
            Outcome::Failure => ExitCode::from(2),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => simulate::run(a),
        Command::LinearMap(a) => linear_map::run(a),
        Command::Besov(a) => besov::run(a),
        Command::ParaproductCheck(a) => paraproduct::run(a),
        Command::Verify(a) => verify::verify(&a.run_dir),
        Command::Report(a) => verify::report(&a.run_dir),
    };
    match result {
        Ok(o) => o.into(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
