//! `eureka` — rank tabular features by judged interestingness, then build
//! interpretable top-K classifiers and compare against accuracy-first
//! baselines.

mod commands;
mod config;
mod error;
mod output;

use clap::{Parser, Subcommand};
use config::{JudgeMode, RankingMethod, RunConfig};
use error::CliError;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "eureka",
    version,
    about = "Interestingness-first feature ranking and top-K classifier sweeps"
)]
struct Cli {
    /// Run configuration file (.toml or .json).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Produce an interestingness ranking with the configured judge.
    Rank {
        /// Overrides ranking.method: pairwise, active, or direct.
        #[arg(long)]
        method: Option<String>,
    },
    /// Sweep top-K classifiers over a stored ranking and report K'.
    Sweep {
        /// ranking.json produced by `rank`.
        #[arg(long)]
        ranking: PathBuf,
    },
    /// Run the three accuracy-first baseline rankers (plus the stored
    /// interestingness ranking, when given) and tabulate top features.
    Baselines {
        /// Optional ranking.json produced by `rank`.
        #[arg(long)]
        ranking: Option<PathBuf>,
    },
    /// Measure estimator error versus comparison budget.
    Rankbench,
    /// Measure run-to-run ranking stability for both ranking methods.
    Stability,
}

fn parse_method(raw: &str) -> Result<RankingMethod, CliError> {
    match raw {
        "pairwise" => Ok(RankingMethod::Pairwise),
        "active" => Ok(RankingMethod::Active),
        "direct" => Ok(RankingMethod::Direct),
        other => Err(CliError::Config(format!(
            "unknown ranking method {other:?}; expected pairwise, active, or direct"
        ))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .ok_or_else(|| CliError::Config("--config <file> is required".into()))?;
    let mut config = RunConfig::load(&config_path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = cli.out {
        config.output.dir = out;
    }

    let dispatch = |config: &RunConfig| -> Result<(), CliError> {
        match &cli.command {
            Command::Rank { method } => {
                let method = method.as_deref().map(parse_method).transpose()?;
                commands::cmd_rank(config, method)
            }
            Command::Sweep { ranking } => commands::cmd_sweep(config, ranking),
            Command::Baselines { ranking } => commands::cmd_baselines(config, ranking.as_deref()),
            Command::Rankbench => commands::cmd_rankbench(config),
            Command::Stability => commands::cmd_stability(config),
        }
    };

    // Live judges are rate-limited by running the whole command inside a
    // thread pool sized to the configured in-flight limit.
    if config.judge.mode == JudgeMode::Live {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.judge.in_flight)
            .build()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
        pool.install(|| dispatch(&config))
    } else {
        dispatch(&config)
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
