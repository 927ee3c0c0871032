//! `phimetric` command-line tool.
//!
//! Exit codes: 0 success, 1 check or convergence failure, 2 usage or
//! configuration error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use commands::{Ctx, Status};
use config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "phimetric", version, about = "Experiments on φ-metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(
        long,
        global = true,
        env = "PHIMETRIC_OUT",
        default_value = "phimetric-out"
    )]
    out: PathBuf,

    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Sampled axiom and φ-continuity checks.
    Check,
    /// Fixed-point iteration for a registered map.
    Solve,
    /// Level-indexed refinement of a cover of a point cloud.
    Refine,
    /// ε-net and ball cover of a point cloud.
    Cover,
    /// Plain Picard trace with Cauchy and boundedness tests.
    Trace,
}

fn run(cli: Cli) -> Result<Status> {
    let path = cli.config.context("--config is required")?;
    let cfg = ExperimentConfig::load(&path)?;
    std::fs::create_dir_all(&cli.out)
        .with_context(|| format!("cannot create output directory {}", cli.out.display()))?;
    let ctx = Ctx {
        seed: cli.seed.unwrap_or(cfg.seed),
        cfg,
        out: cli.out,
        verbose: cli.verbose,
    };
    if ctx.verbose {
        eprintln!("config {} seed {}", path.display(), ctx.seed);
    }
    match cli.command {
        Command::Check => commands::check(&ctx),
        Command::Solve => commands::solve_cmd(&ctx),
        Command::Refine => commands::refine(&ctx),
        Command::Cover => commands::cover(&ctx),
        Command::Trace => commands::trace(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
