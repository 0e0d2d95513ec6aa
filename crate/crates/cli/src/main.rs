mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "pfilt", version, about = "p^n-filtration criteria and character certificates for dual Weyl modules")]
pub struct Cli {
    /// Directory for cached tables and Weyl characters.
    #[arg(long, env = "PFILT_CACHE", global = true)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Args, Clone)]
pub struct SystemArgs {
    /// Cartan type, e.g. A2, B2, G2, A1xA1.
    #[arg(long = "type", short = 't')]
    pub ty: String,
    #[arg(long)]
    pub p: u64,
    /// Decomposition table to ingest before computing.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}

#[derive(Subcommand)]
pub enum Command {
    /// Coxeter number, positive roots, α₀, ρ and simple roots.
    Info {
        #[arg(value_name = "TYPE", required_unless_present = "ty")]
        name: Option<String>,
        #[arg(long = "type", short = 't')]
        ty: Option<String>,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Evaluate every filtration criterion for one weight.
    Criteria {
        #[command(flatten)]
        sys: SystemArgs,
        /// Comma-separated coordinates in the fundamental weight basis.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Build the level-n certificate for one weight.
    Certify {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Exit with status 3 when the certificate is UNKNOWN.
        #[arg(long)]
        strict: bool,
    },
    /// Certify every weight in a box `lo..hi` (inclusive).
    Scan {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long = "box", value_name = "LO..HI")]
        bounds: String,
        #[arg(long)]
        strict: bool,
    },
    /// Re-check the worked examples bundled with the tool.
    VerifyPaper,
    /// Solve restricted decomposition numbers and write them as JSON.
    Table {
        #[command(flatten)]
        sys: SystemArgs,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<pfilt_core::Error>() {
                Some(pfilt_core::Error::InvariantViolation(_)) => ExitCode::from(commands::EXIT_INVARIANT),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
