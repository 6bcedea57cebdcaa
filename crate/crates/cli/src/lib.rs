//! Command-line front end: reads problem files, runs the pipeline and writes
//! text or JSON reports.
//!
//! Exit codes: 0 for a result (anomalous or not), 2 for invalid input, 3 for
//! numerical failure or oracle disagreement.

use std::process::ExitCode;

use thiserror::Error;

pub mod args;
pub mod commands;
pub mod problem;
pub mod report;
mod text;

pub use args::{Cli, Command, Method, OutputFormat};
pub use problem::ProblemFile;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Core(#[from] anomaly_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 3,
        }
    }
}

/// Result of one invocation: stdout, stderr and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

/// Runs one invocation. A report whose own checks fail (oracle mismatch,
/// failed exact check) is still printed, with exit code 3.
pub fn run(cli: &Cli) -> Outcome {
    let report = match commands::execute(cli) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
                code: e.exit_code(),
            }
        }
    };
    let stdout = match cli.output {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("reports contain only finite numbers and strings");
            s.push('\n');
            s
        }
        OutputFormat::Text => text::render(&report),
    };
    let failures = report.failures();
    Outcome {
        stdout,
        stderr: failures.iter().map(|f| format!("error: {f}\n")).collect(),
        code: if failures.is_empty() { 0 } else { 3 },
    }
}

pub fn main_with(cli: &Cli) -> ExitCode {
    let out = run(cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}
