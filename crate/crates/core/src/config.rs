//! Simulation and stress configuration.
//!
//! Serialized key names follow the conventional symbol names (`K`, `T`,
//! `theta_burnout`, ...) so config files read like the model description;
//! the Rust field names spell out the role instead.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::EmbeddingParams;
use crate::env::ID_SLOTS;
use crate::neural::TrainConfig;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid config field `{field}`: {reason}")]
    Invalid {
        field: &'static str,
        reason: &'static str,
    },
}

fn invalid(field: &'static str, reason: &'static str) -> ConfigError {
    ConfigError::Invalid { field, reason }
}

/// Marketplace economics and contractor-generation ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MarketParams {
    pub load_min: f64,
    pub load_max: f64,
    pub recovery_min: f64,
    pub recovery_max: f64,
    pub base_price: f64,
    pub latency_ms: f64,
    pub supply: f64,
    /// Per-episode multiplicative decay of the demand counter.
    pub demand_decay: f64,
    /// EMA rate of the reputation update.
    pub reputation_rate: f64,
    pub initial_reputation: f64,
    /// Fraction of the base success probability kept past burnout.
    pub burnout_collapse: f64,
    /// Latency normaliser in the context vector.
    pub latency_scale_ms: f64,
}

impl Default for MarketParams {
    fn default() -> Self {
        Self {
            load_min: 0.10,
            load_max: 0.20,
            recovery_min: 0.015,
            recovery_max: 0.04,
            base_price: 20.0,
            latency_ms: 50.0,
            supply: 10.0,
            demand_decay: 0.95,
            reputation_rate: 0.1,
            initial_reputation: 0.5,
            burnout_collapse: 0.1,
            latency_scale_ms: 100.0,
        }
    }
}

/// Hyperparameters of the statistical baselines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineParams {
    pub linucb_alpha: f64,
    pub linucb_lambda: f64,
    /// `None` means an unbounded window (plain LinUCB).
    pub swucb_window: Option<usize>,
    pub thompson_noise_var: f64,
    pub thompson_lambda: f64,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            linucb_alpha: 1.0,
            linucb_lambda: 1.0,
            swucb_window: Some(50),
            thompson_noise_var: 0.25,
            thompson_lambda: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationConfig {
    #[serde(rename = "K")]
    pub num_contractors: usize,
    #[serde(rename = "T")]
    pub horizon: usize,
    #[serde(rename = "d_q")]
    pub query_dim: usize,
    #[serde(rename = "d")]
    pub feature_dim: usize,
    #[serde(rename = "theta_burnout")]
    pub burnout_threshold: f64,
    #[serde(rename = "zeta")]
    pub protection_trigger: f64,
    #[serde(rename = "gamma")]
    pub surge_gamma: f64,
    #[serde(rename = "lambda_ridge")]
    pub ridge_lambda: f64,
    #[serde(rename = "beta_ucb")]
    pub ucb_beta: f64,
    #[serde(rename = "eta_0")]
    pub fusion_eta0: f64,
    #[serde(rename = "delta")]
    pub fusion_decay: f64,
    #[serde(rename = "tau")]
    pub reinvert_period: usize,
    #[serde(rename = "B")]
    pub replay_capacity: usize,
    #[serde(rename = "alpha_prior")]
    pub prior_scale: f64,
    #[serde(rename = "alpha_sig")]
    pub sigmoid_sharpness: f64,
    #[serde(rename = "beta_sig")]
    pub sigmoid_shift: f64,
    #[serde(rename = "N_offline")]
    pub offline_samples: usize,
    pub agency_enabled: bool,
    pub seed: u64,
    pub market: MarketParams,
    pub embedding: EmbeddingParams,
    pub baselines: BaselineParams,
    pub offline_train: TrainConfig,
    pub online_train: TrainConfig,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            num_contractors: 100,
            horizon: 200,
            query_dim: 384,
            feature_dim: 64,
            burnout_threshold: 0.8,
            protection_trigger: 0.75,
            surge_gamma: 0.5,
            ridge_lambda: 1.0,
            ucb_beta: 0.06,
            fusion_eta0: 0.5,
            fusion_decay: 0.9995,
            reinvert_period: 100,
            replay_capacity: 100,
            prior_scale: 10.0,
            sigmoid_sharpness: 6.0,
            sigmoid_shift: 2.5,
            offline_samples: 5000,
            agency_enabled: true,
            seed: 0,
            market: MarketParams::default(),
            embedding: EmbeddingParams::default(),
            baselines: BaselineParams::default(),
            offline_train: TrainConfig::offline_default(),
            online_train: TrainConfig::online_default(),
        }
    }
}

impl SimulationConfig {
    /// The self-protection fatigue level `ζ·θ`.
    pub fn protection_level(&self) -> f64 {
        self.protection_trigger * self.burnout_threshold
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.num_contractors < 1 {
            return Err(invalid("K", "must be at least 1"));
        }
        if self.num_contractors > ID_SLOTS {
            return Err(invalid(
                "K",
                "exceeds the 100 one-hot id slots of the context",
            ));
        }
        if self.horizon < 1 {
            return Err(invalid("T", "must be at least 1"));
        }
        if self.query_dim < 2 {
            return Err(invalid("d_q", "must be at least 2"));
        }
        if self.feature_dim < 1 {
            return Err(invalid("d", "must be at least 1"));
        }
        if !(self.protection_trigger > 0.0 && self.protection_trigger < 1.0) {
            return Err(invalid("zeta", "must lie in (0, 1)"));
        }
        if !(self.burnout_threshold > 0.0 && self.burnout_threshold <= 1.0) {
            return Err(invalid("theta_burnout", "must lie in (0, 1]"));
        }
        if !(self.fusion_decay > 0.0 && self.fusion_decay <= 1.0) {
            return Err(invalid("delta", "must lie in (0, 1]"));
        }
        if !(self.fusion_eta0 >= 0.0) {
            return Err(invalid("eta_0", "must be non-negative"));
        }
        if !(self.ucb_beta >= 0.0) {
            return Err(invalid("beta_ucb", "must be non-negative"));
        }
        if self.reinvert_period < 1 {
            return Err(invalid("tau", "must be at least 1"));
        }
        if self.replay_capacity < 1 {
            return Err(invalid("B", "must be at least 1"));
        }
        if !(self.prior_scale > 0.0) {
            return Err(invalid("alpha_prior", "must be positive"));
        }
        if !(self.ridge_lambda > 0.0) {
            return Err(invalid("lambda_ridge", "must be positive"));
        }
        if !(self.surge_gamma >= 0.0) {
            return Err(invalid("gamma", "must be non-negative"));
        }
        let m = &self.market;
        if !(m.load_min > 0.0 && m.load_min <= m.load_max) {
            return Err(invalid("market.load_min", "need 0 < load_min <= load_max"));
        }
        if !(m.recovery_min > 0.0 && m.recovery_min <= m.recovery_max) {
            return Err(invalid(
                "market.recovery_min",
                "need 0 < recovery_min <= recovery_max",
            ));
        }
        if !(m.supply > 0.0) {
            return Err(invalid("market.supply", "must be positive"));
        }
        if !(m.base_price > 0.0) {
            return Err(invalid("market.base_price", "must be positive"));
        }
        if !(m.latency_scale_ms > 0.0) {
            return Err(invalid("market.latency_scale_ms", "must be positive"));
        }
        if !(m.demand_decay >= 0.0 && m.demand_decay <= 1.0) {
            return Err(invalid("market.demand_decay", "must lie in [0, 1]"));
        }
        if !(m.reputation_rate > 0.0 && m.reputation_rate <= 1.0) {
            return Err(invalid("market.reputation_rate", "must lie in (0, 1]"));
        }
        if !(m.burnout_collapse >= 0.0 && m.burnout_collapse <= 1.0) {
            return Err(invalid("market.burnout_collapse", "must lie in [0, 1]"));
        }
        self.embedding.validate()?;
        self.offline_train.validate("offline_train")?;
        self.online_train.validate("online_train")?;
        if self.baselines.swucb_window == Some(0) {
            return Err(invalid("baselines.swucb_window", "must be at least 1"));
        }
        Ok(())
    }

    /// Hash of every field the offline prior depends on. A stored prior is
    /// only valid for configurations with the same fingerprint.
    pub fn prior_fingerprint(&self) -> u64 {
        let mut h = Fnv::new();
        h.u64(self.seed);
        h.u64(self.num_contractors as u64);
        h.u64(self.query_dim as u64);
        h.u64(self.feature_dim as u64);
        h.f64(self.ridge_lambda);
        h.f64(self.prior_scale);
        h.f64(self.sigmoid_sharpness);
        h.f64(self.sigmoid_shift);
        h.u64(self.offline_samples as u64);
        let m = &self.market;
        for v in [m.base_price, m.latency_ms, m.latency_scale_ms] {
            h.f64(v);
        }
        let e = &self.embedding;
        for v in [
            e.shared_component,
            e.skill_mean,
            e.skill_spread,
            e.skill_min,
            e.skill_max,
            e.task_alignment,
        ] {
            h.f64(v);
        }
        let t = &self.offline_train;
        h.f64(t.learning_rate);
        h.u64(t.batch_size as u64);
        h.u64(t.epochs as u64);
        h.f64(t.clip_norm);
        h.finish()
    }
}

struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
    fn bytes(&mut self, b: &[u8]) {
        for x in b {
            self.0 ^= u64::from(*x);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01B3);
        }
    }
    fn u64(&mut self, v: u64) {
        self.bytes(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.bytes(&v.to_bits().to_le_bytes());
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

/// Environmental stress applied to a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StressConfig {
    /// Multiplier on every fatigue increment.
    pub omega_surge: f64,
    /// Std of Gaussian noise on the observed fatigue and price slots.
    pub sigma_noise: f64,
    /// Fraction of the workforce replaced at the horizon midpoint.
    pub rho_turnover: f64,
}

impl Default for StressConfig {
    fn default() -> Self {
        Self {
            omega_surge: 1.0,
            sigma_noise: 0.0,
            rho_turnover: 0.0,
        }
    }
}

impl StressConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.omega_surge >= 1.0) {
            return Err(invalid("omega_surge", "must be at least 1"));
        }
        if !(self.sigma_noise >= 0.0) {
            return Err(invalid("sigma_noise", "must be non-negative"));
        }
        if !(self.rho_turnover >= 0.0 && self.rho_turnover <= 0.5) {
            return Err(invalid("rho_turnover", "must lie in [0, 0.5]"));
        }
        Ok(())
    }
}
