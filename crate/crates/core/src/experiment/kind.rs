use alloc::boxed::Box;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::{
    Greedy, GreedyMode, LinUcb, Oracle, SlidingWindowUcb, ThompsonSampling, Topsis,
};
use crate::config::SimulationConfig;
use crate::env::ContextVector;
use crate::hybrid::{HybridAllocator, PhysicsPrior};
use crate::policy::Allocator;
use crate::rng::{stream, Stream};

use super::ExperimentError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    GreedyMaxRep,
    GreedyMinPrice,
    Topsis,
    #[serde(rename = "linucb")]
    LinUcb,
    #[serde(rename = "swucb")]
    SwUcb,
    Thompson,
    Hybrid,
    HybridPrior,
    Oracle,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 9] = [
        PolicyKind::GreedyMaxRep,
        PolicyKind::GreedyMinPrice,
        PolicyKind::Topsis,
        PolicyKind::LinUcb,
        PolicyKind::SwUcb,
        PolicyKind::Thompson,
        PolicyKind::Hybrid,
        PolicyKind::HybridPrior,
        PolicyKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::GreedyMaxRep => "greedy_max_rep",
            PolicyKind::GreedyMinPrice => "greedy_min_price",
            PolicyKind::Topsis => "topsis",
            PolicyKind::LinUcb => "linucb",
            PolicyKind::SwUcb => "swucb",
            PolicyKind::Thompson => "thompson",
            PolicyKind::Hybrid => "hybrid",
            PolicyKind::HybridPrior => "hybrid_prior",
            PolicyKind::Oracle => "oracle",
        }
    }

    /// Display label used in tables and plots.
    pub fn label(self) -> &'static str {
        match self {
            PolicyKind::GreedyMaxRep => "Greedy (Max-Rep)",
            PolicyKind::GreedyMinPrice => "Greedy (Min-Price)",
            PolicyKind::Topsis => "TOPSIS",
            PolicyKind::LinUcb => "LinUCB",
            PolicyKind::SwUcb => "SW-UCB",
            PolicyKind::Thompson => "Thompson",
            PolicyKind::Hybrid => "Hybrid (No Prior)",
            PolicyKind::HybridPrior => "Hybrid + Prior",
            PolicyKind::Oracle => "Oracle (No Fatigue)",
        }
    }

    pub fn needs_prior(self) -> bool {
        self == PolicyKind::HybridPrior
    }

    /// Fresh allocator for one run. Policy randomness comes from the run
    /// seed's own streams.
    pub fn build(
        self,
        config: &SimulationConfig,
        prior: Option<&PhysicsPrior>,
        seed: u64,
    ) -> Result<Box<dyn Allocator>, ExperimentError> {
        let k = config.num_contractors;
        let b = &config.baselines;
        Ok(match self {
            PolicyKind::GreedyMaxRep => Box::new(Greedy::new(GreedyMode::MaxReputation)),
            PolicyKind::GreedyMinPrice => Box::new(Greedy::new(GreedyMode::MinPrice)),
            PolicyKind::Topsis => Box::new(Topsis),
            PolicyKind::LinUcb => Box::new(LinUcb::new(k, b.linucb_alpha, b.linucb_lambda)),
            PolicyKind::SwUcb => Box::new(SlidingWindowUcb::new(
                k,
                b.linucb_alpha,
                b.linucb_lambda,
                b.swucb_window,
            )),
            PolicyKind::Thompson => Box::new(ThompsonSampling::new(
                ContextVector::len_for(config.query_dim),
                b.thompson_lambda,
                b.thompson_noise_var,
                stream(seed, Stream::Policy),
            )),
            PolicyKind::Hybrid => Box::new(HybridAllocator::cold(
                config,
                &mut stream(seed, Stream::Init),
                stream(seed, Stream::Policy),
            )),
            PolicyKind::HybridPrior => {
                let prior = prior.ok_or(ExperimentError::MissingPrior)?;
                Box::new(HybridAllocator::with_prior(
                    config,
                    prior,
                    &mut stream(seed, Stream::Init),
                    stream(seed, Stream::Policy),
                )?)
            }
            PolicyKind::Oracle => Box::new(Oracle),
        })
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown policy name")]
pub struct UnknownPolicy;

impl FromStr for PolicyKind {
    type Err = UnknownPolicy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or(UnknownPolicy)
    }
}
