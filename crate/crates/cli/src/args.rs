use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "anomaly", version, about = "Perturbative anomalies of commuting Hamiltonian/symmetry pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,

    /// Absolute eigenvalue clustering tolerance (overrides the file).
    #[arg(long, global = true)]
    pub tol_cluster: Option<f64>,

    /// Relative rank cut for the brute-force cohomology.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,

    /// Absolute tolerance below which an obstruction counts as zero.
    #[arg(long, global = true)]
    pub tol_obstruction: Option<f64>,

    /// Order to which the series is continued when unobstructed.
    #[arg(long, global = true)]
    pub order: Option<usize>,

    /// Seed for the randomized gauge self-check of `anomaly`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Joint spectrum of (H, S).
    Spectrum { file: PathBuf },
    /// Dimensions of H⁰, H¹, H².
    Cohomology {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// First order, obstruction class and the series to `--order`.
    Anomaly { file: PathBuf },
    /// Exact check of the weight-derivative cocycle of an sl(2) Verma module.
    VermaCheck {
        /// Highest weight, `P` or `P/Q`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Truncation degree N.
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Theorem,
    Brute,
    Both,
}
