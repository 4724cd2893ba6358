use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gravdec::{run, Command, RunOptions};

/// Gravitational decoherence rates, tables and figure data.
#[derive(Debug, Parser)]
#[command(name = "gravdec", version)]
struct Cli {
    /// rates | table1 | fig1 | entangle-scan | torsion | thresholds | gradiometer
    command: Command,
    /// Scenario file (TOML); rates and table1 default to the shipped table1 set.
    #[arg(long)]
    scenarios: Option<PathBuf>,
    /// Output directory for the CSV and JSON files.
    #[arg(long)]
    out: PathBuf,
    /// Seed for Monte Carlo and random-state paths.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the geometric factor C.
    #[arg(long)]
    c_factor: Option<f64>,
    /// Measured visibilities for fig1.
    #[arg(long)]
    measured: Option<PathBuf>,
    /// Add a provenance column.
    #[arg(long)]
    verbose: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions {
        scenarios: cli.scenarios,
        out: cli.out,
        seed: cli.seed,
        c_factor: cli.c_factor,
        measured: cli.measured,
        verbose: cli.verbose,
    };
    match run(cli.command, &opts) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("gravdec {}: {e}", cli.command);
            ExitCode::FAILURE
        }
    }
}
