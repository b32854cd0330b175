//! `resetlab`: simulate, splice, price and audit `.qct` circuits.
//!
//! Exit codes: 0 success, 2 malformed input (circuit text, receipts CSV,
//! counts or map files), 3 bad configuration (flags, paths, catalog).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "resetlab", version, about = "Reset-splice billing laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CatalogArg {
    /// Pricing catalog file (defaults to the built-in catalog)
    #[arg(long, value_name = "PATH")]
    catalog: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a circuit and print its gate census
    Parse {
        input: PathBuf,
        /// Print the canonical text instead of the census
        #[arg(long)]
        canonical: bool,
    },
    /// Sample a circuit and write a counts table
    Simulate {
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Disable readout and conditional-X errors
        #[arg(long, conflicts_with = "noise")]
        noiseless: bool,
        /// Error rates, e.g. `eps_read=0.0326,eps_condx=0.002`
        #[arg(long, value_name = "SPEC")]
        noise: Option<String>,
        /// Counts file; stdout when absent
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Splice map; also writes one marginal table per part
        #[arg(long, value_name = "PATH")]
        map: Option<PathBuf>,
    },
    /// Join circuits into one task separated by resets
    Splice {
        #[arg(required = true)]
        parts: Vec<PathBuf>,
        #[arg(long, default_value_t = 4)]
        resets: usize,
        /// Repeat the part list this many times
        #[arg(long, default_value_t = 1)]
        copies: usize,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// File stem of the composite and its map
        #[arg(long, default_value = "composite")]
        name: String,
    },
    /// Price one task of a circuit
    Bill {
        input: PathBuf,
        /// Catalog entry
        #[arg(long, default_value = "target")]
        model: String,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        /// Wall time in seconds; estimated from the Bell calibration when absent
        #[arg(long)]
        time: Option<u64>,
        /// Spliced parts, for effective-shot accounting
        #[arg(long, default_value_t = 1)]
        parts: u64,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Price receipt rows and compute savings against the per-shot baseline
    Report {
        /// CSV with columns label,parts,resets,shots,wall_time_s
        receipts: PathBuf,
        #[arg(long, default_value = "target")]
        model: String,
        /// Baseline price of one shot
        #[arg(long, default_value = "0.0015")]
        baseline: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Scan a circuit for spliced-task patterns
    Detect {
        input: PathBuf,
        /// Amount billed for the task; enables the underpricing audit
        #[arg(long)]
        billed: Option<String>,
        /// Per-gate catalog entry used as the fair price
        #[arg(long, default_value = "target_per_gate")]
        fair: String,
        /// Flag bills below this fraction of the fair quote
        #[arg(long, default_value = "0.5")]
        threshold: String,
        #[command(flatten)]
        catalog: CatalogArg,
    },
    /// Build a benchmark mix and splice it
    Mix {
        /// Shipped preset (mix4a..mix4d, mix8..mix80)
        #[arg(long, conflicts_with = "size")]
        preset: Option<String>,
        /// Random mix of this many circuits
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        resets: usize,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Write the fixture tree
    Fixtures {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
