use std::path::PathBuf;

use forge_core::embedding::EmbeddingError;
use forge_core::experiment::ExperimentError;
use forge_core::hybrid::PriorError;
use forge_core::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum ForgeError {
    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: unknown configuration key `{key}`", path.display())]
    UnknownKey { path: PathBuf, key: String },
    #[error("{}", path.display())]
    Config { path: PathBuf, source: ConfigError },
    #[error("{}: line {line}: {message}", path.display())]
    EmbeddingRow {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: line {line}: {message}", path.display())]
    Table {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}", path.display())]
    Embedding {
        path: PathBuf,
        source: EmbeddingError,
    },
    #[error("{}: not a prior artifact ({reason})", path.display())]
    PriorFormat { path: PathBuf, reason: String },
    #[error("{}: prior was built for configuration hash {found:#018x}, this configuration hashes to {expected:#018x}", path.display())]
    PriorHash {
        path: PathBuf,
        expected: u64,
        found: u64,
    },
    #[error("{}: prior was built on a different embedding world ({found:#018x}, expected {expected:#018x})", path.display())]
    PriorWorld {
        path: PathBuf,
        expected: u64,
        found: u64,
    },
    #[error("unknown experiment {0}; expected 1, 2 or 3")]
    UnknownExperiment(u8),
    #[error(transparent)]
    Pretrain(#[from] PriorError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
}

impl ForgeError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ForgeError::Io {
            path: path.into(),
            source,
        }
    }
}
