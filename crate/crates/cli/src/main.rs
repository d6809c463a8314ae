//! `paracalc` command-line front end.
//!
//! Exit status: 0 on success, 2 on invalid input, 3 when `--strict` is set and
//! the answer is `Open`.

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use report::Failure;

const EXIT_INVALID: u8 = 2;
const EXIT_UNSETTLED: u8 = 3;

fn configure_threads() -> Result<(), Failure> {
    let Ok(text) = std::env::var("PARACALC_THREADS") else { return Ok(()) };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::new(format!("PARACALC_THREADS must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::new(format!("cannot configure thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| commands::run(&cli));
    match outcome {
        Ok(report) => {
            let written = match cli.format {
                Format::Json => report::write_json(&report.body),
                Format::Csv => report::write_csv(&report.body),
            };
            if let Err(e) = written {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
                eprintln!("{}", serde_json::json!({ "error": e.to_string() }));
                return ExitCode::FAILURE;
            }
            if cli.strict && report.unsettled {
                ExitCode::from(EXIT_UNSETTLED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(failure) => {
            eprintln!("{}", serde_json::json!({ "error": failure.message }));
            ExitCode::from(EXIT_INVALID)
        }
    }
}
