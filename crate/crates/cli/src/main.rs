//! `bln`: solve, verify, sweep and stability runs driven by a TOML file.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or I/O error,
//! 3 a solver blew up.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;

#[derive(Parser)]
#[command(name = "bln", version, about = "Vanishing-viscosity solver and entropy-condition verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory [default: `out` in the config, else ./out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `verify.seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve and write field.csv, bounds.json and sweep.csv.
    Solve(Common),
    /// Run the entropy, boundary and initial-trace checks; writes report.json.
    Verify(Common),
    /// Cauchy sweep over the viscosity schedule, plus optional grid refinement.
    Sweep(Common),
    /// L1 stability between the configured problem and its perturbation.
    Stability(Common),
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let (Command::Solve(c) | Command::Verify(c) | Command::Sweep(c) | Command::Stability(c)) = &cli.command;
    let mut cfg = Config::load(&c.config)?;
    if let Some(seed) = c.seed {
        cfg.verify.seed = seed;
    }
    let out = c.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let outcome = match &cli.command {
        Command::Solve(_) => commands::solve(&cfg, &out)?,
        Command::Verify(_) => commands::verify(&cfg, &out)?,
        Command::Sweep(_) => commands::sweep(&cfg, &out)?,
        Command::Stability(_) => commands::stability(&cfg, &out)?,
    };
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let blowup = e
                .chain()
                .any(|c| c.downcast_ref::<bln_core::Error>().is_some_and(|e| e.is_blowup()));
            ExitCode::from(if blowup { 3 } else { 2 })
        }
    }
}
