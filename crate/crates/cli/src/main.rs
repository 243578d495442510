//! `abideal`: enumerate and verify the correspondence between abelian ideals
//! of the Borel subalgebra of sp(2n) and the cohomology of its nilradical.

mod cache;
mod commands;
mod config;
mod output;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use abideal_core::Error;
use clap::Parser;

use crate::config::{Cli, Format, RunConfig};
use crate::output::{usage, UsageError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig::from_cli(&cli);
    match execute(&cli, &cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(Error::RankAboveCap {
                what: "cohomology", ..
            }) = e.downcast_ref()
            {
                eprintln!("hint: rank 4 cohomology needs --allow-rank4-cohomology");
            }
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}

fn is_usage(e: &anyhow::Error) -> bool {
    e.downcast_ref::<UsageError>().is_some()
        || matches!(
            e.downcast_ref::<Error>(),
            Some(
                Error::InvalidRank(_)
                    | Error::RankAboveCap { .. }
                    | Error::RankMismatch { .. }
                    | Error::Parse(_)
                    | Error::InvalidPermutation(_)
            )
        )
}

fn execute(cli: &Cli, cfg: &RunConfig) -> anyhow::Result<bool> {
    if cfg.format == Format::Csv && !cli.command.supports_csv() {
        return Err(usage(format!("{} has no CSV form", cli.command.name())));
    }
    let out = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()?
            .install(|| commands::run(&cli.command, cli.rank, cfg))?,
        None => commands::run(&cli.command, cli.rank, cfg)?,
    };
    let bytes = out.render(cfg.format)?;
    match &cfg.out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    for c in out.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}: {}", c.id, c.anchor);
    }
    Ok(out.passed())
}
