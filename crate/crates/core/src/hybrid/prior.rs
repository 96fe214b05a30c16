use rand::Rng;

use crate::config::SimulationConfig;
use crate::embedding::{EmbeddingError, EmbeddingSpace};
use crate::linalg::{spd_inverse, LinalgError, Matrix};
use crate::neural::{
    generate_offline_dataset, train_offline, NeuralError, OfflineDataset, TrainReport, TwoTowerNet,
};
use crate::rng::{stream, Stream};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PriorError {
    #[error("dataset fingerprint {dataset:#018x} does not match configuration {config:#018x}")]
    Fingerprint { dataset: u64, config: u64 },
    #[error("feature dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Neural(#[from] NeuralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Offline warm start: the fitted network (id columns still as trained) and
/// `α·A₀⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicsPrior {
    pub net: TwoTowerNet,
    pub a0_inv: Matrix,
    pub alpha: f64,
    pub fingerprint: u64,
}

/// `A₀ = λI + Σ φᵢφᵢᵀ` over the dataset's features under `net`.
pub fn prior_gram(
    net: &TwoTowerNet,
    dataset: &OfflineDataset,
    lambda: f64,
) -> Result<Matrix, NeuralError> {
    let mut a0 = Matrix::scaled_identity(net.feature_dim(), lambda);
    for s in dataset.samples() {
        a0.add_outer(&net.forward(s.context.as_slice())?.phi, 1.0);
    }
    Ok(a0)
}

pub fn build_physics_prior(
    net: &TwoTowerNet,
    dataset: &OfflineDataset,
    lambda: f64,
    alpha: f64,
) -> Result<PhysicsPrior, PriorError> {
    let a0 = prior_gram(net, dataset, lambda)?;
    let a0_inv = spd_inverse(&a0)?.scaled(alpha);
    Ok(PhysicsPrior {
        net: net.clone(),
        a0_inv,
        alpha,
        fingerprint: dataset.fingerprint(),
    })
}

/// Full offline phase: dataset, fit, prior.
pub fn pretrain_prior(
    config: &SimulationConfig,
    space: &EmbeddingSpace,
) -> Result<(PhysicsPrior, TrainReport), PriorError> {
    pretrain_prior_with(
        config,
        space,
        &mut stream(config.seed, Stream::Offline),
        &mut stream(config.seed, Stream::Init),
    )
}

fn pretrain_prior_with<R: Rng + ?Sized>(
    config: &SimulationConfig,
    space: &EmbeddingSpace,
    data_rng: &mut R,
    init_rng: &mut R,
) -> Result<(PhysicsPrior, TrainReport), PriorError> {
    let dataset = generate_offline_dataset(config, space, data_rng)?;
    if dataset.fingerprint() != config.prior_fingerprint() {
        return Err(PriorError::Fingerprint {
            dataset: dataset.fingerprint(),
            config: config.prior_fingerprint(),
        });
    }
    let mut net = TwoTowerNet::random(config.query_dim, config.feature_dim, init_rng);
    let report = train_offline(&mut net, &dataset, &config.offline_train, data_rng)?;
    let prior = build_physics_prior(&net, &dataset, config.ridge_lambda, config.prior_scale)?;
    Ok((prior, report))
}
