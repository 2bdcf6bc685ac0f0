use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "lac",
    version,
    about = "Families of subsets avoiding Y_k and Y'_k on consecutive levels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output representation.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for exhaustive commands (default: available cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for sampled inputs.
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,
    /// Cap on candidate sets for exhaustive enumeration.
    #[arg(long, global = true)]
    pub max_elements: Option<usize>,
    /// Wall-clock limit for exhaustive commands.
    #[arg(long, default_value_t = 300.0, global = true)]
    pub max_seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Lemma1,
    Lemma2,
    Theorem9,
    Identities,
    Certificate,
    Doublecount,
}

#[derive(Debug, Args)]
pub struct Size {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lacunary sums for every residue and the closed-form extremal value.
    Formula(Size),
    /// Emit the residue-avoiding family and check it.
    Construct {
        #[command(flatten)]
        size: Size,
        /// Also write the family, one set per line, to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a family file for copies of Y_k and Y'_k.
    VerifyFamily {
        path: PathBuf,
        #[arg(long)]
        k: u32,
        /// Ground set size (default: largest element in the file).
        #[arg(long)]
        n: Option<u32>,
    },
    /// Exact maximum by branch and bound.
    Search {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
        /// Claimed upper bound; reaching it ends the search early.
        #[arg(long)]
        prune_bound: Option<u64>,
        /// Skip partial families that a relabeling of [n] maps to a
        /// lexicographically larger one (full mode).
        #[arg(long)]
        symmetry: bool,
    },
    /// Run one of the exhaustive or arithmetic verifiers.
    Verify {
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum)]
        which: Which,
        /// Random families sampled by the double count.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}
