use alloc::vec::Vec;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::ConfigError;
use crate::math::{dot, sqrt};

use super::dataset::OfflineDataset;
use super::net::{NeuralError, TwoTowerNet};
use super::replay::ReplayBuffer;

/// Optimiser settings. Plain mini-batch gradient descent with global-norm
/// clipping; `epochs` is used offline, `steps_per_episode` online.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub steps_per_episode: usize,
    pub clip_norm: f64,
}

impl TrainConfig {
    pub fn offline_default() -> Self {
        Self {
            learning_rate: 1e-2,
            batch_size: 64,
            epochs: 20,
            steps_per_episode: 0,
            clip_norm: 5.0,
        }
    }

    pub fn online_default() -> Self {
        Self {
            learning_rate: 1e-3,
            batch_size: 32,
            epochs: 0,
            steps_per_episode: 1,
            clip_norm: 5.0,
        }
    }

    pub fn validate(&self, field: &'static str) -> Result<(), ConfigError> {
        if !(self.learning_rate > 0.0) {
            return Err(ConfigError::Invalid {
                field,
                reason: "learning_rate must be positive",
            });
        }
        if self.batch_size == 0 {
            return Err(ConfigError::Invalid {
                field,
                reason: "batch_size must be at least 1",
            });
        }
        if !(self.clip_norm > 0.0) {
            return Err(ConfigError::Invalid {
                field,
                reason: "clip_norm must be positive",
            });
        }
        Ok(())
    }
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self::online_default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Mean mini-batch loss of each epoch.
    pub epoch_losses: Vec<f64>,
}

/// Rescales `grad` to norm `max_norm` if it is longer. Returns the
/// original norm.
pub fn clip_gradient(grad: &mut [f64], max_norm: f64) -> f64 {
    let n = sqrt(dot(grad, grad));
    if n > max_norm {
        let s = max_norm / n;
        grad.iter_mut().for_each(|g| *g *= s);
    }
    n
}

/// Offline fit on the simulator dataset. Every sample must carry zero
/// fatigue, an all-zero id slice, full availability and a label in `[0, 1]`.
pub fn train_offline<R: Rng + ?Sized>(
    net: &mut TwoTowerNet,
    dataset: &OfflineDataset,
    config: &TrainConfig,
    rng: &mut R,
) -> Result<TrainReport, NeuralError> {
    dataset.validate()?;
    if let Some(s) = dataset.samples().first() {
        if s.context.len() != net.context_dim() {
            return Err(NeuralError::Dimension {
                expected: net.context_dim(),
                actual: s.context.len(),
            });
        }
    }
    let n = dataset.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    if n == 0 {
        return Ok(TrainReport { epoch_losses });
    }
    let samples = dataset.samples();
    for _ in 0..config.epochs {
        order.shuffle(rng);
        let (mut total, mut batches) = (0.0, 0usize);
        for chunk in order.chunks(config.batch_size) {
            let batch = chunk
                .iter()
                .map(|&i| (samples[i].context.as_slice(), samples[i].label));
            let (loss, mut grad) = net.loss_and_gradients(batch)?;
            clip_gradient(&mut grad, config.clip_norm);
            net.apply_gradient(&grad, config.learning_rate);
            total += loss;
            batches += 1;
        }
        epoch_losses.push(total / batches as f64);
    }
    Ok(TrainReport { epoch_losses })
}

/// `steps_per_episode` gradient steps, each on `min(batch_size, len)`
/// entries drawn without replacement from the buffer. No-op when empty.
pub fn online_replay_update<R: Rng + ?Sized>(
    net: &mut TwoTowerNet,
    buffer: &ReplayBuffer,
    config: &TrainConfig,
    rng: &mut R,
) -> Result<(), NeuralError> {
    if buffer.is_empty() {
        return Ok(());
    }
    let m = config.batch_size.min(buffer.len());
    for _ in 0..config.steps_per_episode {
        let picks = index::sample(rng, buffer.len(), m);
        let batch = picks.iter().map(|i| {
            let (c, r) = buffer.get(i).expect("index within buffer");
            (c.as_slice(), *r)
        });
        let (_, mut grad) = net.loss_and_gradients(batch)?;
        clip_gradient(&mut grad, config.clip_norm);
        net.apply_gradient(&grad, config.learning_rate);
    }
    Ok(())
}
