//! `hbie`: batch front end for the Helmholtz Neumann solvers.
//!
//! Exit status: 0 all checks pass, 1 some check failed, 2 configuration
//! error (nothing written), 3 incompatible Neumann data, 4 numerical or
//! output failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Command;

/// Environment variable holding the worker thread count.
const THREADS_VAR: &str = "HBIE_THREADS";

#[derive(Parser)]
#[command(name = "hbie", version, about = "Helmholtz Neumann boundary integral solver")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override one configuration key, e.g. `--set curve.radius=2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an interior Neumann problem and sample the field.
    SolveInterior(RunArgs),
    /// Solve an exterior (radiating) Neumann problem and sample the field.
    SolveExterior(RunArgs),
    /// Scan sigma_min of the boundary system over a wavenumber range.
    EigScan(RunArgs),
    /// Run the verification suite on a manufactured problem.
    Verify(RunArgs),
    /// Measure the error decay under node doubling.
    Converge(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::SolveInterior(a) => (Command::SolveInterior, a),
        Cmd::SolveExterior(a) => (Command::SolveExterior, a),
        Cmd::EigScan(a) => (Command::EigScan, a),
        Cmd::Verify(a) => (Command::Verify, a),
        Cmd::Converge(a) => (Command::Converge, a),
    };
    ExitCode::from(run(command, &args) as u8)
}

fn run(command: Command, args: &RunArgs) -> i32 {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    eprintln!("hbie: cannot size the thread pool: {e}");
                    return 4;
                }
            }
            _ => {
                eprintln!("hbie: {THREADS_VAR} must be a positive integer, got `{v}`");
                return 2;
            }
        }
    }
    let cfg = match config::load(&args.config, command, &args.set) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("hbie: {e}");
            return 2;
        }
    };
    let outcome = match commands::execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("hbie: {e}");
            return e.exit_code();
        }
    };
    let hash = cfg.hash();
    let (csv_path, report_path) = cfg.output_paths();
    let report = outcome.report.render(command.name(), &hash, &cfg.canonical());
    let written = output::write_file(&csv_path, &outcome.table.to_csv(&hash))
        .and_then(|_| output::write_file(&report_path, report.as_bytes()));
    if let Err(e) = written {
        eprintln!("hbie: {}", commands::RunError::from(e));
        return 4;
    }
    let pass = outcome.report.all_pass();
    println!("{}: {}", command.name(), if pass { "PASS" } else { "FAIL" });
    println!("csv: {}", csv_path.display());
    println!("report: {}", report_path.display());
    if pass {
        0
    } else {
        1
    }
}
