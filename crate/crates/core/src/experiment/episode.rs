use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::config::{SimulationConfig, StressConfig};
use crate::embedding::{generate_workforce, EmbeddingSpace};
use crate::env::{sample_outcome, Marketplace};
use crate::hybrid::PhysicsPrior;
use crate::math::argmax_first;
use crate::policy::{Allocator, Observation};
use crate::rng::{stream, Stream};

use super::kind::PolicyKind;
use super::ExperimentError;

/// One episode as seen by the metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub selected: usize,
    pub outcome: f64,
    /// Fatigue of the selected contractor before the assignment.
    pub fatigue: f64,
    pub availability: f64,
    pub p_actual: f64,
    pub oracle: usize,
    /// Zero-fatigue `P_base` of the best contractor for the task.
    pub oracle_value: f64,
    pub burnout: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub policy: PolicyKind,
    pub seed: u64,
    pub steps: Vec<StepRecord>,
    /// Contractor slots replaced at the midpoint turnover.
    pub replaced: Vec<usize>,
}

/// The embedding world shared by every run of a configuration.
pub fn build_world(config: &SimulationConfig) -> Result<EmbeddingSpace, ExperimentError> {
    Ok(EmbeddingSpace::generate(
        config.query_dim,
        config.embedding.clone(),
        &mut stream(config.seed, Stream::World),
    )?)
}

/// Runs `T` episodes. Each step: availability declarations, task draw,
/// (noisy) observation, selection, outcome draw from the true `P_actual`,
/// state update, policy update. Turnover happens once, before episode
/// `⌊T/2⌋ + 1`.
pub fn run_episode_loop(
    policy: &mut dyn Allocator,
    kind: PolicyKind,
    market: &mut Marketplace,
    space: &EmbeddingSpace,
    stress: &StressConfig,
    seed: u64,
) -> EpisodeLog {
    let config = market.config().clone();
    let horizon = config.horizon;
    let mut tasks = stream(seed, Stream::Tasks);
    let mut outcomes = stream(seed, Stream::Outcomes);
    let mut noise = stream(seed, Stream::Noise);
    let mut turnover = stream(seed, Stream::Turnover);
    let mut steps = Vec::with_capacity(horizon);
    let mut replaced = Vec::new();
    for t in 0..horizon {
        if t == horizon / 2 && t > 0 && stress.rho_turnover > 0.0 {
            replaced = market.turnover(stress.rho_turnover, space, &mut turnover);
        }
        market.declare_all();
        let task = space.sample_task(&mut tasks);
        let contexts = market.observe(&task, stress.sigma_noise, &mut noise);
        let before = market.states().to_vec();
        let obs = Observation {
            episode: t,
            task: &task,
            contexts: &contexts,
            contractors: market.contractors(),
            states: &before,
            space,
            sigmoid_sharpness: config.sigmoid_sharpness,
            sigmoid_shift: config.sigmoid_shift,
        };
        let selected = policy.select(&obs);
        let p_base: Vec<f64> = (0..market.len()).map(|k| market.p_base(&task, k)).collect();
        let oracle = argmax_first(p_base.iter().copied()).expect("non-empty pool");
        let p_actual = market.p_actual(&task, selected);
        let outcome = sample_outcome(p_actual, &mut outcomes);
        let fatigue = before[selected].fatigue;
        steps.push(StepRecord {
            selected,
            outcome,
            fatigue,
            availability: before[selected].availability,
            p_actual,
            oracle,
            oracle_value: p_base[oracle],
            burnout: fatigue > config.burnout_threshold,
        });
        market.advance(selected, outcome, stress.omega_surge);
        let obs = Observation {
            episode: t,
            task: &task,
            contexts: &contexts,
            contractors: market.contractors(),
            states: &before,
            space,
            sigmoid_sharpness: config.sigmoid_sharpness,
            sigmoid_shift: config.sigmoid_shift,
        };
        policy.update(&obs, selected, outcome);
    }
    EpisodeLog {
        policy: kind,
        seed,
        steps,
        replaced,
    }
}

/// Fresh workforce from the run seed, fresh policy, full loop. The oracle
/// runs with fatigue dynamics switched off.
pub fn run_policy(
    config: &SimulationConfig,
    space: &EmbeddingSpace,
    kind: PolicyKind,
    prior: Option<&PhysicsPrior>,
    seed: u64,
    stress: &StressConfig,
) -> Result<EpisodeLog, ExperimentError> {
    config.validate()?;
    stress.validate()?;
    let workforce = generate_workforce(config, space, &mut stream(seed, Stream::Workforce))?;
    let mut market = Marketplace::new(config, workforce)?;
    if kind == PolicyKind::Oracle {
        market.set_fatigue_dynamics(false);
    }
    let mut policy = kind.build(config, prior, seed)?;
    Ok(run_episode_loop(
        policy.as_mut(),
        kind,
        &mut market,
        space,
        stress,
        seed,
    ))
}
