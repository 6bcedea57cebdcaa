use std::process::ExitCode;

use anomaly_cli::Cli;
use clap::Parser;

fn main() -> ExitCode {
    anomaly_cli::main_with(&Cli::parse())
}
