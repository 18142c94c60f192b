use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use phiconv::report::{apply_overrides, execute_scenario, rejection_report, Report};
use phiconv::scenario::parse_scenario;

/// Exit status when the task itself reported an error.
const EXIT_TASK_ERROR: u8 = 1;
/// Exit status for unreadable or invalid scenarios and I/O failures.
const EXIT_BAD_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "phiconv", version, about = "Φ-convexity experiments on finite point clouds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario file and emit a JSON report.
    Run {
        scenario: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-sample table for genericity tasks.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Use the full indicator basis for a lipschitz family.
        #[arg(long)]
        lip_full: bool,
    },
}

fn emit(report: &Report, out: Option<&PathBuf>) -> Result<(), String> {
    let json = report.to_json().map_err(|e| e.to_string())?;
    match out {
        Some(path) => fs::write(path, json).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn run(
    scenario: PathBuf,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
    seed: Option<u64>,
    lip_full: bool,
) -> Result<u8, String> {
    let text = fs::read(&scenario).map_err(|e| format!("{}: {e}", scenario.display()))?;
    let parsed = parse_scenario(&text).and_then(|mut cfg| {
        apply_overrides(&mut cfg, seed, lip_full)?;
        Ok(cfg)
    });
    let cfg = match parsed {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("phiconv: {e}");
            emit(&rejection_report(&e), out.as_ref())?;
            return Ok(EXIT_BAD_INPUT);
        }
    };

    let output = execute_scenario(&cfg);
    if let Some(path) = &csv {
        match output.csv() {
            Some(table) => {
                fs::write(path, table).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None if !output.report.status.is_error() => {
                eprintln!("phiconv: task `{}` produces no sample table; --csv ignored", cfg.task.name())
            }
            None => {}
        }
    }
    emit(&output.report, out.as_ref())?;
    if output.report.status.is_error() {
        Ok(EXIT_TASK_ERROR)
    } else {
        Ok(0)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run {
        scenario,
        out,
        csv,
        seed,
        lip_full,
    } = cli.command;
    match run(scenario, out, csv, seed, lip_full) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("phiconv: {msg}");
            ExitCode::from(EXIT_BAD_INPUT)
        }
    }
}
