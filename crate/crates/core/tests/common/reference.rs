//! Agency-free restatement of the marketplace and a policy wrapper that
//! records what it was shown.

use forge_core::env::{ContextVector, Contractor};
use forge_core::{Allocator, Observation, SimulationConfig};

/// Plain re-statement of the marketplace without any availability logic:
/// fatigue moves by `load·ω` or `−recovery`, then demand, reputation and
/// price follow.
pub struct ReferenceMarket {
    pub fatigue: Vec<f64>,
    pub reputation: Vec<f64>,
    pub demand: Vec<f64>,
    pub price: Vec<f64>,
}

impl ReferenceMarket {
    pub fn new(pool: &[Contractor], config: &SimulationConfig) -> Self {
        let k = pool.len();
        Self {
            fatigue: vec![0.0; k],
            reputation: vec![config.market.initial_reputation; k],
            demand: vec![0.0; k],
            price: pool.iter().map(|c| c.base_price).collect(),
        }
    }

    pub fn step(
        &mut self,
        pool: &[Contractor],
        config: &SimulationConfig,
        selected: usize,
        outcome: f64,
        omega: f64,
    ) {
        for (k, c) in pool.iter().enumerate() {
            if k == selected {
                self.fatigue[k] = (self.fatigue[k] + c.load * omega).min(1.0);
            } else {
                self.fatigue[k] = (self.fatigue[k] - c.recovery).max(0.0);
            }
        }
        let m = &config.market;
        for (k, c) in pool.iter().enumerate() {
            self.demand[k] *= m.demand_decay;
            if k == selected {
                self.demand[k] += 1.0;
                self.reputation[k] =
                    (1.0 - m.reputation_rate) * self.reputation[k] + m.reputation_rate * outcome;
            }
            self.price[k] = c.base_price * (1.0 + config.surge_gamma * self.demand[k] / c.supply);
        }
    }
}

/// Delegates to an inner policy and records every availability slot it was shown.
pub struct Recording {
    pub inner: Box<dyn Allocator>,
    pub seen: Vec<f64>,
}

impl Allocator for Recording {
    fn name(&self) -> &'static str {
        self.inner.name()
    }
    fn select(&mut self, obs: &Observation<'_>) -> usize {
        self.seen
            .extend(obs.contexts.iter().map(ContextVector::availability));
        self.inner.select(obs)
    }
    fn update(&mut self, obs: &Observation<'_>, selected: usize, reward: f64) {
        self.inner.update(obs, selected, reward)
    }
}
