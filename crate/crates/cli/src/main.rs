use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::{Flags, Format, RunConfig};

/// Complex supersymmetric partners of the free particle and the oscillator.
#[derive(Debug, Parser)]
#[command(name = "ermakov-susy", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write potential, missing-state and partner-state tables.
    Generate(RunArgs),
    /// Run the residual, PT and bi-orthogonality checks.
    Verify(RunArgs),
    /// Diagonalize the discretized partner Hamiltonian.
    Spectrum(RunArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// periodic, hyperbolic or oscillator
    #[arg(long)]
    family: Option<String>,
    /// Parameters as inline JSON, or a path to a JSON config file
    #[arg(long, value_name = "JSON|FILE")]
    params: Option<String>,
    /// "xmin,xmax,n"
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Output directory (generate) or report file (verify, spectrum)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Oscillator partner states to emit, "n0..n1" inclusive
    #[arg(long)]
    states: Option<String>,
    /// Threshold override, e.g. residual=1e-6 (repeatable)
    #[arg(long, value_name = "KEY=VALUE")]
    tolerance: Vec<String>,
    /// Number of eigenvalues to report (spectrum)
    #[arg(long)]
    levels: Option<usize>,
}

impl From<RunArgs> for Flags {
    fn from(a: RunArgs) -> Self {
        Flags {
            family: a.family,
            params: a.params,
            grid: a.grid,
            out: a.out,
            format: a.format,
            states: a.states,
            tolerance: a.tolerance,
            levels: a.levels,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (run, args): (fn(&RunConfig) -> config::CliResult<String>, RunArgs) = match cli.command {
        Command::Generate(a) => (commands::generate, a),
        Command::Verify(a) => (commands::run_verify, a),
        Command::Spectrum(a) => (commands::run_spectrum, a),
    };
    match RunConfig::resolve(args.into()).and_then(|cfg| run(&cfg)) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
