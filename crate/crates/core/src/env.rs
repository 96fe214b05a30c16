//! The K+1 marketplace: contractor pool, restless fatigue, surge pricing,
//! reputation, availability declarations and context construction.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::SimulationConfig;
use crate::embedding::{base_success_prob, cosine_similarity, fresh_contractor, EmbeddingSpace};
use crate::math::{ceil, norm};
use crate::rng::standard_normal;

pub const N_TAGS: usize = 5;
/// Width of the contractor id one-hot. Fixed even when `K < 100`.
pub const ID_SLOTS: usize = 100;
/// fatigue, normalised price, normalised latency, availability
pub const SCALAR_SLOTS: usize = 4;
/// Contractor-profile slice of the context: tag ‖ id ‖ scalars.
pub const PROFILE_DIM: usize = N_TAGS + ID_SLOTS + SCALAR_SLOTS;

pub const FULL_AVAILABILITY: f64 = 1.0;
pub const PARTIAL_AVAILABILITY: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("contractor {id}: capability must be unit-norm (got {norm})")]
    CapabilityNorm { id: usize, norm: f64 },
    #[error("contractor {id}: {field} must be positive")]
    NonPositive { id: usize, field: &'static str },
    #[error("contractor id {0} exceeds the id one-hot width")]
    IdOutOfRange(usize),
    #[error("tag {0} is outside 0..5")]
    UnknownTag(usize),
    #[error("contractor {id} has capability dim {actual}, expected {expected}")]
    Dimension {
        id: usize,
        expected: usize,
        actual: usize,
    },
    #[error("empty contractor pool")]
    EmptyPool,
}

/// Static contractor profile. `capability` is hidden from every allocator
/// except the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contractor {
    pub id: usize,
    pub tag: usize,
    pub capability: Vec<f64>,
    /// Fatigue increment per assignment at full availability.
    pub load: f64,
    /// Fatigue decrement per step without an assignment.
    pub recovery: f64,
    pub base_price: f64,
    pub latency_ms: f64,
    pub supply: f64,
}

impl Contractor {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: usize,
        tag: usize,
        capability: Vec<f64>,
        load: f64,
        recovery: f64,
        base_price: f64,
        latency_ms: f64,
        supply: f64,
    ) -> Result<Self, EnvError> {
        if id >= ID_SLOTS {
            return Err(EnvError::IdOutOfRange(id));
        }
        if tag >= N_TAGS {
            return Err(EnvError::UnknownTag(tag));
        }
        let n = norm(&capability);
        if (n - 1.0).abs() > 1e-6 {
            return Err(EnvError::CapabilityNorm { id, norm: n });
        }
        for (field, v) in [
            ("load", load),
            ("recovery", recovery),
            ("supply", supply),
            ("base_price", base_price),
        ] {
            if !(v > 0.0) {
                return Err(EnvError::NonPositive { id, field });
            }
        }
        Ok(Self {
            id,
            tag,
            capability,
            load,
            recovery,
            base_price,
            latency_ms,
            supply,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractorState {
    pub fatigue: f64,
    pub reputation: f64,
    pub demand: f64,
    pub price: f64,
    pub availability: f64,
}

impl ContractorState {
    pub fn fresh(contractor: &Contractor, config: &SimulationConfig) -> Self {
        Self {
            fatigue: 0.0,
            reputation: config.market.initial_reputation,
            demand: 0.0,
            price: contractor.base_price,
            availability: FULL_AVAILABILITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub tag: usize,
    pub query: Vec<f64>,
}

/// Observable input `[query ‖ tag ‖ id ‖ fatigue ‖ price ‖ latency ‖ availability]`.
///
/// With the default 384-wide query the vector has 493 entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextVector {
    query_dim: usize,
    values: Vec<f64>,
}

impl ContextVector {
    pub fn len_for(query_dim: usize) -> usize {
        query_dim + PROFILE_DIM
    }

    #[allow(clippy::too_many_arguments)]
    pub fn build(
        query: &[f64],
        tag: usize,
        id: usize,
        fatigue: f64,
        price: f64,
        latency: f64,
        availability: f64,
    ) -> Self {
        let query_dim = query.len();
        let mut values = vec![0.0; Self::len_for(query_dim)];
        values[..query_dim].copy_from_slice(query);
        values[query_dim + tag] = 1.0;
        values[query_dim + N_TAGS + id] = 1.0;
        let s = query_dim + N_TAGS + ID_SLOTS;
        values[s] = fatigue;
        values[s + 1] = price;
        values[s + 2] = latency;
        values[s + 3] = availability;
        Self { query_dim, values }
    }

    /// Wraps raw values, e.g. from a dataset. `values.len()` must equal
    /// `query_dim + 109`.
    pub fn from_values(query_dim: usize, values: Vec<f64>) -> Option<Self> {
        (values.len() == Self::len_for(query_dim)).then_some(Self { query_dim, values })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn query_dim(&self) -> usize {
        self.query_dim
    }

    pub fn query(&self) -> &[f64] {
        &self.values[..self.query_dim]
    }

    /// The 109-wide contractor slice fed to the contractor tower.
    pub fn profile(&self) -> &[f64] {
        &self.values[self.query_dim..]
    }

    pub fn tag_range(&self) -> Range<usize> {
        self.query_dim..self.query_dim + N_TAGS
    }

    pub fn id_range(&self) -> Range<usize> {
        let s = self.query_dim + N_TAGS;
        s..s + ID_SLOTS
    }

    fn scalar(&self, offset: usize) -> f64 {
        self.values[self.query_dim + N_TAGS + ID_SLOTS + offset]
    }

    fn scalar_mut(&mut self, offset: usize) -> &mut f64 {
        &mut self.values[self.query_dim + N_TAGS + ID_SLOTS + offset]
    }

    pub fn fatigue(&self) -> f64 {
        self.scalar(0)
    }

    pub fn price(&self) -> f64 {
        self.scalar(1)
    }

    pub fn latency(&self) -> f64 {
        self.scalar(2)
    }

    pub fn availability(&self) -> f64 {
        self.scalar(3)
    }

    pub fn set_fatigue(&mut self, v: f64) {
        *self.scalar_mut(0) = v;
    }

    pub fn set_price(&mut self, v: f64) {
        *self.scalar_mut(1) = v;
    }

    pub fn set_availability(&mut self, v: f64) {
        *self.scalar_mut(3) = v;
    }

    pub fn clear_ids(&mut self) {
        let r = self.id_range();
        self.values[r].iter_mut().for_each(|v| *v = 0.0);
    }
}

/// Threshold policy: partial availability once fatigue exceeds `ζ·θ`
/// (strictly). Always full availability when agency is disabled.
pub fn declare_availability(fatigue: f64, config: &SimulationConfig) -> f64 {
    if config.agency_enabled && fatigue > config.protection_level() {
        PARTIAL_AVAILABILITY
    } else {
        FULL_AVAILABILITY
    }
}

/// Restless fatigue transition for every contractor. The selected one
/// accumulates `a·load·ω`, everyone else recovers.
pub fn step_fatigue(
    states: &mut [ContractorState],
    contractors: &[Contractor],
    selected: usize,
    omega_surge: f64,
) {
    for (k, (s, c)) in states.iter_mut().zip(contractors).enumerate() {
        s.fatigue = if k == selected {
            (s.fatigue + s.availability * c.load * omega_surge).min(1.0)
        } else {
            (s.fatigue - c.recovery).max(0.0)
        };
    }
}

/// Burnout collapse: past the threshold the success probability keeps only
/// `burnout_collapse` (0.1) of its base value. Availability plays no part.
pub fn actual_success_prob(p_base: f64, fatigue: f64, config: &SimulationConfig) -> f64 {
    if fatigue <= config.burnout_threshold {
        p_base
    } else {
        config.market.burnout_collapse * p_base
    }
}

pub fn surge_price(base_price: f64, demand: f64, supply: f64, gamma: f64) -> f64 {
    base_price * (1.0 + gamma * demand / supply)
}

/// Reputation EMA for the selected contractor, demand decay and increment,
/// and price recomputation for everyone.
pub fn update_after_outcome(
    states: &mut [ContractorState],
    contractors: &[Contractor],
    selected: usize,
    outcome: f64,
    config: &SimulationConfig,
) {
    let m = &config.market;
    for (k, (s, c)) in states.iter_mut().zip(contractors).enumerate() {
        s.demand *= m.demand_decay;
        if k == selected {
            s.demand += 1.0;
            s.reputation = (1.0 - m.reputation_rate) * s.reputation + m.reputation_rate * outcome;
        }
        s.price = surge_price(c.base_price, s.demand, c.supply, config.surge_gamma);
    }
}

/// Context for one (task, contractor) pair. Fatigue and price slots get
/// `N(0, σ²)` noise and are clamped to `[0, 1]` and `[0, ∞)`; the true
/// state is not touched.
pub fn observe_context<R: Rng + ?Sized>(
    task: &Task,
    contractor: &Contractor,
    state: &ContractorState,
    sigma_noise: f64,
    price_scale: f64,
    latency_scale: f64,
    rng: &mut R,
) -> ContextVector {
    let (mut fatigue, mut price) = (state.fatigue, state.price / price_scale);
    if sigma_noise > 0.0 {
        fatigue = (fatigue + sigma_noise * standard_normal(rng)).clamp(0.0, 1.0);
        price = (price + sigma_noise * standard_normal(rng)).max(0.0);
    }
    ContextVector::build(
        &task.query,
        contractor.tag,
        contractor.id,
        fatigue,
        price,
        contractor.latency_ms / latency_scale,
        state.availability,
    )
}

/// Bernoulli draw.
pub fn sample_outcome<R: Rng + ?Sized>(p_actual: f64, rng: &mut R) -> f64 {
    if rng.random::<f64>() < p_actual {
        1.0
    } else {
        0.0
    }
}

/// Number of contractors replaced at turnover rate `rho`.
pub fn turnover_count(rho: f64, k: usize) -> usize {
    (ceil(rho * k as f64 - 1e-9).max(0.0) as usize).min(k)
}

/// Replaces `⌈ρK⌉` uniformly chosen contractors with fresh ones in the same
/// id slots (and tags). Returns the replaced ids in ascending order.
pub fn apply_turnover<R: Rng + ?Sized>(
    contractors: &mut [Contractor],
    states: &mut [ContractorState],
    rho: f64,
    config: &SimulationConfig,
    space: &EmbeddingSpace,
    rng: &mut R,
) -> Vec<usize> {
    let n = turnover_count(rho, contractors.len());
    if n == 0 {
        return Vec::new();
    }
    let mut ids = index::sample(rng, contractors.len(), n).into_vec();
    ids.sort_unstable();
    for &k in &ids {
        let tag = contractors[k].tag;
        contractors[k] = fresh_contractor(k, tag, config, space, rng);
        states[k] = ContractorState::fresh(&contractors[k], config);
    }
    ids
}

/// Contractor pool plus its mutable state.
#[derive(Debug, Clone)]
pub struct Marketplace {
    config: SimulationConfig,
    contractors: Vec<Contractor>,
    states: Vec<ContractorState>,
    price_scale: f64,
    fatigue_dynamics: bool,
}

impl Marketplace {
    pub fn new(config: &SimulationConfig, contractors: Vec<Contractor>) -> Result<Self, EnvError> {
        if contractors.is_empty() {
            return Err(EnvError::EmptyPool);
        }
        for c in &contractors {
            if c.capability.len() != config.query_dim {
                return Err(EnvError::Dimension {
                    id: c.id,
                    expected: config.query_dim,
                    actual: c.capability.len(),
                });
            }
        }
        let max_base = contractors.iter().map(|c| c.base_price).fold(0.0, f64::max);
        let states = contractors
            .iter()
            .map(|c| ContractorState::fresh(c, config))
            .collect();
        Ok(Self {
            config: config.clone(),
            contractors,
            states,
            price_scale: 2.0 * max_base,
            fatigue_dynamics: true,
        })
    }

    /// With fatigue dynamics off, fatigue never moves (`Δf = 0`).
    pub fn set_fatigue_dynamics(&mut self, enabled: bool) {
        self.fatigue_dynamics = enabled;
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    pub fn contractors(&self) -> &[Contractor] {
        &self.contractors
    }

    pub fn states(&self) -> &[ContractorState] {
        &self.states
    }

    pub fn states_mut(&mut self) -> &mut [ContractorState] {
        &mut self.states
    }

    pub fn len(&self) -> usize {
        self.contractors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contractors.is_empty()
    }

    pub fn price_scale(&self) -> f64 {
        self.price_scale
    }

    /// Step 0: every contractor declares availability from its own fatigue.
    pub fn declare_all(&mut self) {
        for s in &mut self.states {
            s.availability = declare_availability(s.fatigue, &self.config);
        }
    }

    pub fn observe<R: Rng + ?Sized>(
        &self,
        task: &Task,
        sigma_noise: f64,
        rng: &mut R,
    ) -> Vec<ContextVector> {
        let latency_scale = self.config.market.latency_scale_ms;
        self.contractors
            .iter()
            .zip(&self.states)
            .map(|(c, s)| {
                observe_context(
                    task,
                    c,
                    s,
                    sigma_noise,
                    self.price_scale,
                    latency_scale,
                    rng,
                )
            })
            .collect()
    }

    pub fn p_base(&self, task: &Task, k: usize) -> f64 {
        let s = cosine_similarity(&task.query, &self.contractors[k].capability)
            .expect("task and capability vectors are unit-norm");
        base_success_prob(s, self.config.sigmoid_sharpness, self.config.sigmoid_shift)
    }

    pub fn p_actual(&self, task: &Task, k: usize) -> f64 {
        actual_success_prob(self.p_base(task, k), self.states[k].fatigue, &self.config)
    }

    /// Applies the selected contractor's outcome: fatigue for all, then
    /// reputation, demand and prices.
    pub fn advance(&mut self, selected: usize, outcome: f64, omega_surge: f64) {
        if self.fatigue_dynamics {
            step_fatigue(&mut self.states, &self.contractors, selected, omega_surge);
        }
        update_after_outcome(
            &mut self.states,
            &self.contractors,
            selected,
            outcome,
            &self.config,
        );
    }

    pub fn turnover<R: Rng + ?Sized>(
        &mut self,
        rho: f64,
        space: &EmbeddingSpace,
        rng: &mut R,
    ) -> Vec<usize> {
        apply_turnover(
            &mut self.contractors,
            &mut self.states,
            rho,
            &self.config,
            space,
            rng,
        )
    }
}
