//! File formats and experiment driving for `forge-core`: JSON configs,
//! embedding CSVs, the binary prior artifact, result export and SVG plots.
//! The `forge` binary is a thin CLI over [`run_policy_seeds`],
//! [`run_experiment`] and [`pretrain`].

pub mod config;
pub mod error;
pub mod export;
pub mod plot;
pub mod prior_file;
pub mod world;

pub use config::RunConfig;
pub use error::ForgeError;
pub use export::ResultSet;
pub use world::World;

use forge_core::experiment::{CellResult, ExperimentGrid};
use forge_core::hybrid::{pretrain_prior, PhysicsPrior};
use forge_core::neural::TrainReport;
use forge_core::PolicyKind;

/// Offline phase on `world`.
pub fn pretrain(
    config: &RunConfig,
    world: &World,
) -> Result<(PhysicsPrior, TrainReport), ForgeError> {
    Ok(pretrain_prior(&config.simulation, &world.space)?)
}

/// One policy under the config's own stress, `seeds` runs. Run seeds are
/// derived from the config seed exactly as a one-cell grid would.
pub fn run_policy_seeds(
    config: &RunConfig,
    world: &World,
    policy: PolicyKind,
    prior: Option<&PhysicsPrior>,
    seeds: usize,
) -> Result<ResultSet, ForgeError> {
    let grid = ExperimentGrid {
        experiment: 1,
        policies: vec![policy],
        cells: vec![config.stress],
        repeats: seeds,
        base_seed: config.simulation.seed,
    };
    let result = grid.run(&config.simulation, &world.space, prior, |_| {})?;
    Ok(ResultSet::new(None, config.clone(), result))
}

/// Overrides applied to a standard grid.
#[derive(Debug, Clone, Default)]
pub struct GridOptions {
    pub policies: Option<Vec<PolicyKind>>,
    pub repeats: Option<usize>,
}

/// One of the three standard grids, seeded from the config seed. The
/// config's own stress fields are ignored; the grid supplies them.
pub fn run_experiment(
    config: &RunConfig,
    world: &World,
    experiment: u8,
    options: &GridOptions,
    prior: Option<&PhysicsPrior>,
    on_cell: impl FnMut(&CellResult),
) -> Result<ResultSet, ForgeError> {
    let mut grid = ExperimentGrid::by_id(experiment, config.simulation.seed)
        .ok_or(ForgeError::UnknownExperiment(experiment))?;
    if let Some(p) = &options.policies {
        grid.policies = p.clone();
    }
    if let Some(r) = options.repeats {
        grid.repeats = r;
    }
    let result = grid.run(&config.simulation, &world.space, prior, on_cell)?;
    Ok(ResultSet::new(Some(experiment), config.clone(), result))
}
