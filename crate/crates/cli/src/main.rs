//! `ktree`: critical coupling, simulation, campaigns and rearrangement for
//! Kuramoto oscillators on trees.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kuramoto_trees::Error;

#[derive(Parser, Debug)]
#[command(name = "ktree", version, about = "Kuramoto oscillators on trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Master seed for every random choice.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (directory for `figures`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Critical coupling of a tree file, with the per-edge table.
    Critical {
        tree: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate the phase equations at coupling `k`.
    Simulate {
        tree: PathBuf,
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long = "t-max", default_value_t = 500.0)]
        t_max: f64,
        #[arg(long = "fp-tol", default_value_t = 1e-6)]
        fp_tol: f64,
        /// Keep every N-th step in the trajectory file.
        #[arg(long, default_value_t = 100)]
        stride: usize,
        /// Start from seeded uniform phases in (-pi/2, pi/2) instead of zeros.
        #[arg(long = "random-phases")]
        random_phases: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate the expected critical coupling of a tree family.
    Montecarlo {
        /// chain, star, dumbbell, binary, tadpole:D, random, scale_free
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// uniform, normal, uniform:LO:HI, normal:MEAN:SD
        #[arg(long, default_value = "uniform")]
        dist: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Write the data table for one of the expected-coupling plots.
    Figures {
        /// One of 4, 5, 7, 8, 9, 10, 11.
        #[arg(long)]
        id: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Reassign frequencies so the critical coupling is at most their spread.
    Rearrange {
        tree: PathBuf,
        /// Root of the depth-first numbering.
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a tree file from a family and a frequency distribution.
    Generate {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "uniform")]
        dist: String,
        #[command(flatten)]
        common: Common,
    },
}

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_STRUCTURE: u8 = 3;
pub const EXIT_PARAMETERS: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        e if e.is_structural() => EXIT_STRUCTURE,
        _ => EXIT_PARAMETERS,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAMETERS } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
