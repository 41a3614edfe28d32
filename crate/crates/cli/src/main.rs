//! `mapseek`: enumerate, verify, build instances and run both searches.
//!
//! JSON and CSV go to stdout (or `--out`); summaries go to stderr.
//! Exit codes: 0 success, 1 domain mismatch, 2 usage error, 3 I/O or
//! malformed input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "mapseek", version, about = "Search and verify statistics on noncrossing partitions")]
struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "MAPSEEK_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Objects {
    Nc,
    Pp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Cem,
    Ga,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List NC(n, k) partitions, or PP(n, k) polyominoes, one per line.
    Enumerate {
        n: u32,
        k: u32,
        #[arg(long, value_enum, default_value = "nc")]
        objects: Objects,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV of `partition,value` for a registered statistic.
    Stat {
        #[arg(long)]
        stat: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print N_{n,k}(q,t), or its increment over n - 1.
    Narayana {
        n: u32,
        k: u32,
        #[arg(long)]
        incremental: bool,
    },
    /// Compare the joint distribution of two statistics with N_{n,k}(q,t).
    VerifyPairing {
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Build a rigid-proportion instance and write it as JSON.
    GenDataset {
        n: u32,
        k: u32,
        #[arg(long)]
        refined: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one `partition,skip,m,bag` row per object.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Distance of formulas to an instance.
    EvalFormula {
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        formula: Option<String>,
        /// A formula file; its header selects the notation.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        instance: PathBuf,
        /// Notation of `--formula`.
        #[arg(long, default_value = "infix")]
        notation: String,
    },
    /// Cross-entropy or genetic search for a zero-distance formula.
    Search {
        #[arg(long, value_enum, default_value = "cem")]
        method: Method,
        #[arg(long)]
        instance: PathBuf,
        /// Generation preset, repeatable; all built-in presets when absent.
        #[arg(long)]
        preset: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Iterations (cem) or generations (ga).
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        population: Option<usize>,
        /// Model corpus notation for cem.
        #[arg(long)]
        notation: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-iteration metrics as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Self-training with constraint projection.
    Selftrain {
        #[arg(long)]
        instance: PathBuf,
        /// `baseline`, `oracle:STAT` or `constant:VALUE`.
        #[arg(long, default_value = "baseline")]
        scorer: String,
        #[arg(long, default_value_t = 0.05)]
        val_frac: f64,
        /// Propagate homogeneity of this degree (1 or 2).
        #[arg(long)]
        h: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        max_iters: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        labels_csv: Option<PathBuf>,
    },
    /// The skip/leap exchanging involution on NC(n, 3).
    Bijection {
        #[arg(long)]
        n: u32,
        /// Verify involution and exchange on every partition.
        #[arg(long)]
        check: bool,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn mismatch(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    pub fn usage(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }

    pub fn io(message: impl ToString) -> Self {
        Failure { code: 3, message: message.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
