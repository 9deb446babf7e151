//! `histlda`: generate synthetic collections, fit the mixture-of-histograms
//! model, evaluate fitted densities, and run the estimator comparison.
//!
//! Exit codes: 0 on success, 2 on usage errors, 3 on data errors. Every
//! failure prints one machine-readable line `error: <kind>: <message>` on
//! standard error.

mod cmd;
mod data;
mod error;
mod model_file;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "histlda",
    version,
    about = "Per-unit density estimation as mixtures of shared basis histograms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic collection plus its true component weights
    Generate(cmd::GenerateArgs),
    /// Fit the mixture model to a CSV of (unit_id, t) observations
    Fit(cmd::FitArgs),
    /// Evaluate one unit's fitted density on a uniform grid
    Eval(cmd::EvalArgs),
    /// Compare estimators on freshly generated synthetic collections
    Benchmark(cmd::BenchmarkArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Generate(args) => cmd::run_generate(args),
        Command::Fit(args) => cmd::run_fit(args),
        Command::Eval(args) => cmd::run_eval(args),
        Command::Benchmark(args) => cmd::run_benchmark(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.kind(), e.message());
            ExitCode::from(e.code())
        }
    }
}
