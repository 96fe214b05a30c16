use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::SimulationConfig;
use crate::embedding::{
    base_success_prob, cosine_similarity, generate_workforce, EmbeddingError, EmbeddingSpace,
};
use crate::env::{ContextVector, FULL_AVAILABILITY};

use super::net::NeuralError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfflineSample {
    pub context: ContextVector,
    /// Exact zero-fatigue success probability.
    pub label: f64,
}

/// Simulator dataset with fatigue, ids and availability neutralised, so the
/// fit only sees skill-cluster geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfflineDataset {
    samples: Vec<OfflineSample>,
    fingerprint: u64,
}

impl OfflineDataset {
    pub fn new(samples: Vec<OfflineSample>, fingerprint: u64) -> Self {
        Self {
            samples,
            fingerprint,
        }
    }

    pub fn samples(&self) -> &[OfflineSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn validate(&self) -> Result<(), NeuralError> {
        for (index, s) in self.samples.iter().enumerate() {
            let c = &s.context;
            if c.fatigue() != 0.0 {
                return Err(NeuralError::Impure {
                    index,
                    reason: "fatigue slot is not zero",
                });
            }
            if c.as_slice()[c.id_range()].iter().any(|v| *v != 0.0) {
                return Err(NeuralError::Impure {
                    index,
                    reason: "id slice is not zero",
                });
            }
            if c.availability() != FULL_AVAILABILITY {
                return Err(NeuralError::Impure {
                    index,
                    reason: "availability slot is not 1",
                });
            }
            if !(0.0..=1.0).contains(&s.label) {
                return Err(NeuralError::LabelOutOfRange { index });
            }
        }
        Ok(())
    }
}

/// `N_offline` (task, contractor) pairs from a workforce drawn out of the
/// same world, labelled with exact `P_base`. Contractors are picked
/// uniformly from the offline pool.
pub fn generate_offline_dataset<R: Rng + ?Sized>(
    config: &SimulationConfig,
    space: &EmbeddingSpace,
    rng: &mut R,
) -> Result<OfflineDataset, EmbeddingError> {
    let pool = generate_workforce(config, space, rng)?;
    let max_base = pool.iter().map(|c| c.base_price).fold(0.0, f64::max);
    let price_scale = 2.0 * max_base;
    let latency_scale = config.market.latency_scale_ms;
    let mut samples = Vec::with_capacity(config.offline_samples);
    for _ in 0..config.offline_samples {
        let task = space.sample_task(rng);
        let c = &pool[rng.random_range(0..pool.len())];
        let s = cosine_similarity(&task.query, &c.capability)?;
        let label = base_success_prob(s, config.sigmoid_sharpness, config.sigmoid_shift);
        let mut context = ContextVector::build(
            &task.query,
            c.tag,
            c.id,
            0.0,
            c.base_price / price_scale,
            c.latency_ms / latency_scale,
            FULL_AVAILABILITY,
        );
        context.clear_ids();
        samples.push(OfflineSample { context, label });
    }
    Ok(OfflineDataset::new(samples, config.prior_fingerprint()))
}
