use alloc::vec::Vec;

use crate::baselines::closeness_for;
use crate::config::SimulationConfig;
use crate::env::ContextVector;
use crate::linalg::LinalgError;
use crate::neural::{online_replay_update, NeuralError, ReplayBuffer, TrainConfig, TwoTowerNet};
use crate::policy::{Allocator, Observation};
use crate::rng::SimRng;

use super::fusion::{fused_score_and_select, FusionState};
use super::gram::GramState;
use super::prior::PhysicsPrior;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HybridError {
    #[error("prior was built for configuration {prior:#018x}, run uses {config:#018x}")]
    Fingerprint { prior: u64, config: u64 },
    #[error("prior dimensions ({query}, {feature}) do not match configuration ({want_query}, {want_feature})")]
    Dimension {
        query: usize,
        feature: usize,
        want_query: usize,
        want_feature: usize,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Per-episode diagnostics of the most recent selection.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SelectionTrace {
    pub r_hat: Vec<f64>,
    pub width: Vec<f64>,
    pub closeness: Vec<f64>,
    pub scores: Vec<f64>,
    pub eta: f64,
}

#[derive(Debug, Clone)]
pub struct HybridAllocator {
    net: TwoTowerNet,
    gram: GramState,
    fusion: FusionState,
    buffer: ReplayBuffer,
    online: TrainConfig,
    rng: SimRng,
    with_prior: bool,
    /// φ and context of the pending selection, computed with the weights
    /// used to score it.
    pending: Option<(usize, Vec<f64>, ContextVector)>,
    trace: SelectionTrace,
}

impl HybridAllocator {
    /// No prior: random weights, `A = λI`.
    pub fn cold(config: &SimulationConfig, init_rng: &mut SimRng, rng: SimRng) -> Self {
        let net = TwoTowerNet::random(config.query_dim, config.feature_dim, init_rng);
        let gram = GramState::new(
            config.feature_dim,
            config.ridge_lambda,
            config.reinvert_period,
        );
        Self::assemble(config, net, gram, rng, false)
    }

    /// Prior weights with freshly drawn id columns, `A⁻¹ = α·A₀⁻¹`.
    pub fn with_prior(
        config: &SimulationConfig,
        prior: &PhysicsPrior,
        init_rng: &mut SimRng,
        rng: SimRng,
    ) -> Result<Self, HybridError> {
        if prior.fingerprint != config.prior_fingerprint() {
            return Err(HybridError::Fingerprint {
                prior: prior.fingerprint,
                config: config.prior_fingerprint(),
            });
        }
        if prior.net.query_dim() != config.query_dim
            || prior.net.feature_dim() != config.feature_dim
        {
            return Err(HybridError::Dimension {
                query: prior.net.query_dim(),
                feature: prior.net.feature_dim(),
                want_query: config.query_dim,
                want_feature: config.feature_dim,
            });
        }
        let mut net = prior.net.clone();
        net.reinit_id_columns(init_rng);
        let gram = GramState::from_inverse(prior.a0_inv.clone(), config.reinvert_period)?;
        Ok(Self::assemble(config, net, gram, rng, true))
    }

    fn assemble(
        config: &SimulationConfig,
        net: TwoTowerNet,
        gram: GramState,
        rng: SimRng,
        with_prior: bool,
    ) -> Self {
        Self {
            net,
            gram,
            fusion: FusionState::new(config.fusion_eta0, config.fusion_decay, config.ucb_beta),
            buffer: ReplayBuffer::new(config.replay_capacity),
            online: config.online_train,
            rng,
            with_prior,
            pending: None,
            trace: SelectionTrace::default(),
        }
    }

    pub fn net(&self) -> &TwoTowerNet {
        &self.net
    }

    pub fn gram(&self) -> &GramState {
        &self.gram
    }

    pub fn fusion(&self) -> &FusionState {
        &self.fusion
    }

    pub fn buffer(&self) -> &ReplayBuffer {
        &self.buffer
    }

    pub fn last_trace(&self) -> &SelectionTrace {
        &self.trace
    }

    fn score(&mut self, obs: &Observation<'_>) -> Result<usize, NeuralError> {
        let k = obs.contexts.len();
        let closeness = closeness_for(obs);
        let q = self.net.query_embedding(obs.contexts[0].query());
        let mut r_hat = Vec::with_capacity(k);
        let mut width = Vec::with_capacity(k);
        let mut phis = Vec::with_capacity(k);
        for ctx in obs.contexts {
            let f = self.net.forward_with_query(&q, ctx.as_slice())?;
            r_hat.push(f.prob);
            width.push(self.gram.width(&f.phi));
            phis.push(f.phi);
        }
        let mut eligible = alloc::vec![false; k];
        for i in obs.eligible() {
            eligible[i] = true;
        }
        let (pick, scores) =
            fused_score_and_select(&r_hat, &width, &closeness, &eligible, &self.fusion);
        self.pending = Some((pick, phis.swap_remove(pick), obs.contexts[pick].clone()));
        self.trace = SelectionTrace {
            r_hat,
            width,
            closeness,
            scores,
            eta: self.fusion.eta,
        };
        Ok(pick)
    }
}

impl Allocator for HybridAllocator {
    fn name(&self) -> &'static str {
        if self.with_prior {
            "hybrid_prior"
        } else {
            "hybrid"
        }
    }

    fn select(&mut self, obs: &Observation<'_>) -> usize {
        self.score(obs)
            .expect("contexts sized by the same configuration as the network")
    }

    fn update(&mut self, obs: &Observation<'_>, selected: usize, reward: f64) {
        let (phi, ctx) = match self.pending.take() {
            Some((k, phi, ctx)) if k == selected => (phi, ctx),
            _ => {
                let ctx = obs.contexts[selected].clone();
                let phi = self.net.forward(ctx.as_slice()).expect("sized context").phi;
                (phi, ctx)
            }
        };
        self.buffer.push(ctx, reward);
        self.gram.posterior_update(&phi);
        online_replay_update(&mut self.net, &self.buffer, &self.online, &mut self.rng)
            .expect("sized contexts");
        self.fusion.decay();
    }
}
