//! `pants`: reports on truncated multiplication operators.
//!
//! ```text
//! pants spectrum --N 200
//! pants pseudospectrum --grid "-1.2,1.2,-1.2,1.2,41" --out runs/
//! pants commutator-report --config pants.toml
//! ```
//!
//! Exit status: 0 on success, 2 when a report's tolerance check fails, 1 on
//! bad input.

use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod output;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("write failed: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] pants_core::Error),
}

fn main() -> ExitCode {
    let cli = match config::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cfg = match config::resolve(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match commands::run(&cfg) {
        Ok(report) => {
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            if report.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in &report.failures {
                    eprintln!("FAIL {f}");
                }
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
