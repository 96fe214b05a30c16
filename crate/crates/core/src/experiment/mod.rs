//! Episode loop, metrics and the stress grids.

mod episode;
mod grid;
mod kind;
mod metrics;

pub use episode::{build_world, run_episode_loop, run_policy, EpisodeLog, StepRecord};
pub use grid::{CellResult, ExperimentGrid, GridResult};
pub use kind::PolicyKind;
pub use metrics::{compute_metrics, run_metrics, MetricsReport, RunMetrics, METRIC_NAMES};

use alloc::boxed::Box;

use crate::config::ConfigError;
use crate::embedding::EmbeddingError;
use crate::env::EnvError;
use crate::hybrid::HybridError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Hybrid(#[from] HybridError),
    #[error("policy hybrid_prior needs a pretrained prior")]
    MissingPrior,
    #[error("no episode logs to aggregate")]
    NoLogs,
    #[error("experiment {experiment}, policy {policy}, cell {cell}, repeat {repeat}: {source}")]
    Cell {
        experiment: u8,
        policy: &'static str,
        cell: usize,
        repeat: usize,
        source: Box<ExperimentError>,
    },
}
