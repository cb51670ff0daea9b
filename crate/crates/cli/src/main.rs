//! `shelab`: run, validate and describe experiments on the stochastic
//! heat-type equation.
//!
//! Exit status: 0 when the experiment passes, 2 when it runs but its
//! statistical or numerical verdict fails, 1 on any error.

mod config;
mod describe;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;
use shelab::ExecMode;

use config::Kind;

#[derive(Parser)]
#[command(name = "shelab", version, about = "Experiments for a massive stochastic heat-type equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's base seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the replica count.
        #[arg(long)]
        replicas: Option<usize>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory (default: the config's `output`, else `shelab-out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run replicas one after another on the calling thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Check a config file and print it with defaults filled in.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Explain what an experiment kind measures and how it is judged.
    Describe {
        /// One of: simulate, ensemble, verify-deterministic, oracle-compare,
        /// scaling-test, holder-fit.
        kind: String,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Describe { kind } => {
            print!("{}", describe::describe(Kind::parse(&kind)?));
            Ok(true)
        }
        Command::Validate { config } => {
            let prep = config::load(&config)?;
            for w in &prep.warnings {
                eprintln!("{w}");
            }
            print!("{}", prep.config.to_toml()?);
            Ok(true)
        }
        Command::Run {
            config,
            seed,
            replicas,
            threads,
            out,
            sequential,
        } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = config::ExperimentConfig::from_toml(&text)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(n) = replicas {
                cfg.replicas = n;
            }
            let prep = config::prepare(cfg)?;
            for w in &prep.warnings {
                eprintln!("{w}");
            }
            if let Some(t) = threads {
                if t == 0 {
                    anyhow::bail!("--threads must be at least 1");
                }
                shelab::par::init_threads(t);
            }
            let mode = if sequential { ExecMode::Sequential } else { ExecMode::Parallel };
            let dir = out
                .or_else(|| prep.config.output.clone())
                .unwrap_or_else(|| PathBuf::from("shelab-out"));
            let outcome = run::run(&prep, &dir, mode)?;
            std::fs::write(dir.join("config.toml"), prep.config.to_toml()?)?;
            let mut files = outcome.files.clone();
            files.push("config.toml".into());
            let manifest = json!({
                "tool": "shelab",
                "version": env!("CARGO_PKG_VERSION"),
                "kind": prep.config.kind,
                "seed": prep.config.seed,
                "replicas": prep.config.replicas,
                "threads": threads,
                "parallel": mode.is_parallel(),
                "config": prep.config,
                "files": files,
                "pass": outcome.pass,
            });
            let f = std::fs::File::create(dir.join("manifest.json"))?;
            shelab::io::write_json(&manifest, f)?;
            for line in &outcome.lines {
                println!("{line}");
            }
            println!(
                "{}: {} (outputs in {})",
                prep.config.kind,
                if outcome.pass { "PASS" } else { "FAIL" },
                dir.display()
            );
            Ok(outcome.pass)
        }
    }
}
