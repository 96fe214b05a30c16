use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use forge::{prior_file, GridOptions, RunConfig, World};
use forge_core::hybrid::PhysicsPrior;
use forge_core::PolicyKind;

#[derive(Parser)]
#[command(
    name = "forge",
    version,
    about = "Crowdsourcing marketplace simulator and allocation benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the offline network and write the prior artifact.
    Pretrain {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `tag,<d_q floats>` rows replacing the synthetic capabilities.
        #[arg(long)]
        embeddings: Option<PathBuf>,
    },
    /// Run one policy over several seeds.
    Run {
        #[arg(long)]
        policy: PolicyKind,
        #[arg(long)]
        config: PathBuf,
        /// Needed by `hybrid_prior`.
        #[arg(long)]
        prior: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        seeds: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        embeddings: Option<PathBuf>,
    },
    /// Run one of the standard experiment grids.
    Grid {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        experiment: u8,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Pretrained prior for `hybrid_prior`; pretrained in-process if absent.
        #[arg(long)]
        prior: Option<PathBuf>,
        /// Comma-separated policy names overriding the grid's list.
        #[arg(long, value_delimiter = ',')]
        policies: Option<Vec<PolicyKind>>,
        /// Repeats per cell overriding the grid's default.
        #[arg(long)]
        repeats: Option<usize>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
    },
    /// Render SVG bar charts from exported table CSVs.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(config: &Path, embeddings: Option<&Path>) -> Result<(RunConfig, World)> {
    let config = RunConfig::load(config)?;
    let world = World::resolve(embeddings, &config.simulation)?;
    Ok((config, world))
}

fn load_prior(
    path: Option<&Path>,
    config: &RunConfig,
    world: &World,
) -> Result<Option<PhysicsPrior>> {
    path.map(|p| prior_file::load(p, &config.simulation, world.source_hash).map_err(Into::into))
        .transpose()
}

/// Lists written files on stdout. A closed pipe is not an error.
fn report(paths: &[PathBuf]) {
    let mut out = std::io::stdout().lock();
    for p in paths {
        if writeln!(out, "{}", p.display()).is_err() {
            return;
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("forge: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Pretrain {
            config,
            out,
            embeddings,
        } => {
            let (config, world) = load(&config, embeddings.as_deref())?;
            let (artifact, train) = forge::pretrain(&config, &world)?;
            if let (Some(first), Some(last)) =
                (train.epoch_losses.first(), train.epoch_losses.last())
            {
                eprintln!(
                    "offline loss {first:.4} -> {last:.4} over {} epochs",
                    train.epoch_losses.len()
                );
            }
            prior_file::save(&out, &artifact, world.source_hash, config.simulation.seed)?;
            report(&[out]);
        }
        Command::Run {
            policy,
            config,
            prior,
            seeds,
            out,
            embeddings,
        } => {
            if seeds == 0 {
                bail!("--seeds must be at least 1");
            }
            let (config, world) = load(&config, embeddings.as_deref())?;
            let prior = load_prior(prior.as_deref(), &config, &world)?;
            if policy.needs_prior() && prior.is_none() {
                bail!("policy {policy} needs --prior (run `forge pretrain` first, or use `--policy hybrid` for the no-prior ablation)");
            }
            let results = forge::run_policy_seeds(&config, &world, policy, prior.as_ref(), seeds)?;
            report(&results.write(&out, policy.name())?);
        }
        Command::Grid {
            experiment,
            config,
            out,
            prior,
            policies,
            repeats,
            embeddings,
        } => {
            let (config, world) = load(&config, embeddings.as_deref())?;
            let options = GridOptions { policies, repeats };
            let needs_prior = match &options.policies {
                Some(p) => p.iter().any(|k| k.needs_prior()),
                None => forge_core::experiment::ExperimentGrid::by_id(experiment, 0)
                    .is_some_and(|g| g.policies.iter().any(|k| k.needs_prior())),
            };
            let mut prior = load_prior(prior.as_deref(), &config, &world)?;
            if needs_prior && prior.is_none() {
                eprintln!("no --prior given; pretraining in-process");
                prior = Some(
                    forge::pretrain(&config, &world)
                        .context("pretraining the prior")?
                        .0,
                );
            }
            let results = forge::run_experiment(
                &config,
                &world,
                experiment,
                &options,
                prior.as_ref(),
                |cell| {
                    let m = &cell.report.mean;
                    eprintln!(
                        "{:<16} cell {:>2}  EReg {:>7.3}  LRew {:.3}  Burn {:>5.1}",
                        cell.policy.name(),
                        cell.cell,
                        m.EReg,
                        m.LRew,
                        m.Burn
                    );
                },
            )?;
            report(&results.write(&out, &format!("exp{experiment}"))?);
        }
        Command::Plot { input, out } => {
            let written = forge::plot::plot_dir(&input, &out)?;
            if written.is_empty() {
                bail!("no table CSVs found in {}", input.display());
            }
            report(&written);
        }
    }
    Ok(())
}
