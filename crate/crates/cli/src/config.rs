use std::path::PathBuf;

use abideal_core::ce::{DEFAULT_COHOMOLOGY_CAP, MAX_COHOMOLOGY_RANK};
use abideal_core::weyl::DEFAULT_GROUP_CAP;
use clap::{Parser, Subcommand, ValueEnum};

use crate::cache::Cache;

#[derive(Debug, Parser)]
#[command(
    name = "abideal",
    version,
    about = "Abelian ideals of the Borel subalgebra of sp(2n) and the cohomology of its nilradical"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Rank n of sp(2n).
    #[arg(long, global = true)]
    pub rank: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads (defaults to one per core).
    #[arg(
        long,
        global = true,
        env = "ABIDEAL_WORKERS",
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    pub workers: Option<u64>,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Raise the cohomology cap from 3 to 4.
    #[arg(long, global = true)]
    pub allow_rank4_cohomology: bool,

    /// Directory for cached structure tables and complex summaries.
    #[arg(long, global = true, env = "ABIDEAL_CACHE_DIR", value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate increasing subsets (abelian ideals).
    Ideals {
        /// List every ideal.
        #[arg(long)]
        list: bool,
        /// Emit the dimension histogram (the default without --list).
        #[arg(long)]
        histogram: bool,
    },
    /// Enumerate the Weyl group.
    Weyl {
        /// List every element with its length and standard form.
        #[arg(long)]
        list: bool,
    },
    /// Check the Weyl group / (permutation, ideal) correspondence.
    Bijection {
        /// Trace a single element, e.g. "[2,-1,3]".
        #[arg(long, value_name = "ELEM")]
        witness: Option<String>,
    },
    /// Structure constants of the positive nilradical.
    Structure,
    /// Betti numbers of the nilradical.
    Betti {
        /// Include the per-weight block table.
        #[arg(long)]
        per_weight: bool,
    },
    /// Check that the monomials f_{Φ_w} form a cohomology basis.
    Classes,
    /// Poincaré polynomials and their identities.
    Poincare,
    /// Run every check and write one consolidated report.
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ideals { .. } => "ideals",
            Command::Weyl { .. } => "weyl",
            Command::Bijection { .. } => "bijection",
            Command::Structure => "structure",
            Command::Betti { .. } => "betti",
            Command::Classes => "classes",
            Command::Poincare => "poincare",
            Command::Verify => "verify",
        }
    }

    pub fn supports_csv(&self) -> bool {
        matches!(
            self,
            Command::Ideals { .. } | Command::Structure | Command::Betti { .. } | Command::Poincare
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
pub struct RunConfig {
    pub group_cap: usize,
    pub cohomology_cap: usize,
    pub workers: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub cache: Option<Cache>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        RunConfig {
            group_cap: DEFAULT_GROUP_CAP,
            cohomology_cap: if cli.allow_rank4_cohomology {
                MAX_COHOMOLOGY_RANK
            } else {
                DEFAULT_COHOMOLOGY_CAP
            },
            workers: cli.workers.map(|w| w as usize),
            format: cli.format,
            out: cli.out.clone(),
            seed: cli.seed,
            cache: cli.cache_dir.clone().map(Cache::new),
        }
    }
}
