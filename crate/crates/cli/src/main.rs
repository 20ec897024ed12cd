//! `czsnt`: batch driver for the dimerized-chain toolkit.
//!
//! Five subcommands cover the library surface: `band`, `stability`,
//! `ground-state`, `rabi`, and `spectra-check`. Each takes an optional TOML
//! parameter file (defaults are built in and printable with
//! `--print-config`), writes its artifacts atomically into an output
//! directory, and prints a one-line JSON summary on standard output. All
//! computations are deterministic, so identical configurations produce
//! byte-identical artifacts.
//!
//! Exit codes: 0 success, 1 input/output failure, 2 configuration or parse
//! error (including undersampled Rabi runs), 3 numerical failure
//! (quadrature or minimum search), 4 model-consistency failure (complex
//! mode dispersion from a non-mirrored profile).

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use czsnt_core::band::BandError;
use czsnt_core::ground_state::GroundStateError;
use czsnt_core::rabi::RabiError;
use czsnt_core::spectra::SpectraError;
use output::Format;
use std::path::PathBuf;
use std::process;

#[derive(Parser)]
#[command(
    name = "czsnt",
    version,
    about = "Dimerized-chain toolkit: band tables, stability scans, double-well search, \
             Rabi wave-packet runs, and peak-table regularity reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dispersion and quasiparticle-energy table over the reduced zone
    Band(RunArgs),
    /// Three-condition stability scan, both branches
    Stability(RunArgs),
    /// Double-well minimum search plus an energy profile table
    GroundState(RunArgs),
    /// Wave-packet inversion trajectory and its amplitude spectrum
    Rabi(RunArgs),
    /// Regularity report over measured peak tables
    SpectraCheck(RunArgs),
}

#[derive(clap::Args)]
pub struct RunArgs {
    /// TOML parameter file; omitted means the built-in defaults
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
    /// Output directory for artifacts
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Format for tabular artifacts (result documents are always JSON)
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Print this command's default parameter file and exit
    #[arg(long)]
    pub print_config: bool,
    /// More diagnostics on standard error (repeatable)
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

/// A run failure: one diagnostic line and the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 2 }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 3 }
    }

    pub fn model(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 4 }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 1 }
    }

    pub fn with_context(mut self, prefix: &str) -> Self {
        self.message = format!("{prefix}: {}", self.message);
        self
    }
}

impl From<BandError> for CliError {
    fn from(e: BandError) -> Self {
        Self::config(e.to_string())
    }
}

impl From<GroundStateError> for CliError {
    fn from(e: GroundStateError) -> Self {
        match e {
            GroundStateError::Quadrature(_) | GroundStateError::SearchFailure { .. } => {
                Self::numerical(e.to_string())
            }
            _ => Self::config(e.to_string()),
        }
    }
}

impl From<RabiError> for CliError {
    fn from(e: RabiError) -> Self {
        match e {
            RabiError::ModelConsistency { .. } => Self::model(e.to_string()),
            _ => Self::config(e.to_string()),
        }
    }
}

impl From<SpectraError> for CliError {
    fn from(e: SpectraError) -> Self {
        Self::config(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Band(args) => commands::run_band(args),
        Command::Stability(args) => commands::run_stability(args),
        Command::GroundState(args) => commands::run_ground_state(args),
        Command::Rabi(args) => commands::run_rabi(args),
        Command::SpectraCheck(args) => commands::run_spectra_check(args),
    };
    if let Err(e) = outcome {
        eprintln!("error: {}", e.message);
        process::exit(e.code);
    }
}
