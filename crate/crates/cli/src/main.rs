mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use degencount::Error;

/// Exact pattern counting in degenerate graphs.
#[derive(Parser)]
#[command(name = "degencount", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Hom,
    Sub,
    Ind,
}

#[derive(Subcommand)]
enum Command {
    /// Count homomorphisms, subgraphs or induced subgraphs of a pattern in a host.
    Count {
        #[arg(value_enum)]
        mode: Mode,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        json: bool,
        /// Cross-check against the brute-force oracle when its guard allows.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Print the homomorphism expansion as `num/den <graph>` lines.
        #[arg(long)]
        emit_expansion: bool,
        /// Iterate every host vertex at every forest node.
        #[arg(long)]
        literal: bool,
    },
    /// Structural report for a pattern: DAG treedepth and treewidth, bounds, obstructions.
    Analyze {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare fast counts with the oracles on generated patterns and hosts.
    Verify {
        /// Largest connected pattern size.
        #[arg(long, default_value_t = 4)]
        max_pattern: usize,
        /// Number of generated hosts.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        max_host: usize,
        #[arg(long, hide = true)]
        inject_mutation: bool,
    },
    /// Print a random d-degenerate host as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time homomorphism counts over growing hosts and fit a log-log slope.
    Bench {
        #[arg(long)]
        pattern: PathBuf,
        /// Host sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        json: bool,
    },
    /// Minimal induced-minor obstructions for DAG treedepth at most 2.
    Obstructions {
        /// Write one edge-list file per obstruction into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recompute the catalog from scratch instead of using the shipped one.
        #[arg(long)]
        derive: bool,
    },
}

/// A failure with the exit code it maps to.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge { .. } | Error::Guard(_) => 3,
            Error::Parse { .. }
            | Error::DuplicateEdge { .. }
            | Error::InvalidEdge(..)
            | Error::NotPermutation
            | Error::Cyclic
            | Error::InvalidForest(_) => 2,
            Error::ObstructionCount(_) | Error::NonInteger(_) | Error::Internal(_) => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count {
            mode,
            pattern,
            host,
            json,
            oracle,
            threads,
            emit_expansion,
            literal,
        } => commands::count(commands::CountArgs {
            mode,
            pattern,
            host,
            json,
            oracle,
            threads,
            emit_expansion,
            literal,
        }),
        Command::Analyze { pattern, json } => commands::analyze(&pattern, json),
        Command::Verify {
            max_pattern,
            seeds,
            seed,
            max_host,
            inject_mutation,
        } => verify::run(&verify::VerifyArgs {
            max_pattern,
            seeds,
            seed,
            max_host,
            inject_mutation,
        }),
        Command::Gen { n, d, seed } => commands::gen(n, d, seed),
        Command::Bench {
            pattern,
            n,
            d,
            seed,
            threads,
            json,
        } => commands::bench(&pattern, &n, d, seed, threads, json),
        Command::Obstructions { out, derive } => commands::obstructions(out.as_deref(), derive),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
