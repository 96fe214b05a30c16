//! The embedding world of a run: synthetic from the config seed, or loaded
//! from a `tag,<d_q floats>` CSV with one row per contractor.

use std::path::Path;

use forge_core::embedding::LabeledEmbedding;
use forge_core::experiment::build_world;
use forge_core::{EmbeddingSpace, SimulationConfig};

use crate::error::ForgeError;

#[derive(Debug, Clone)]
pub struct World {
    pub space: EmbeddingSpace,
    /// 0 for synthetic worlds, otherwise a hash of the loaded rows. Stored
    /// in prior artifacts so a prior is never reused on a different file.
    pub source_hash: u64,
}

impl World {
    pub fn synthetic(config: &SimulationConfig) -> Result<Self, ForgeError> {
        Ok(Self {
            space: build_world(config)?,
            source_hash: 0,
        })
    }

    pub fn from_csv(path: &Path, config: &SimulationConfig) -> Result<Self, ForgeError> {
        let file = std::fs::File::open(path).map_err(|e| ForgeError::io(path, e))?;
        let rows = read_rows(file, config.query_dim, path)?;
        let source_hash = hash_rows(&rows);
        let space =
            EmbeddingSpace::from_labeled_rows(rows, config.query_dim, config.embedding.clone())
                .map_err(|source| ForgeError::Embedding {
                    path: path.into(),
                    source,
                })?;
        Ok(Self { space, source_hash })
    }

    /// `from_csv` when a path is given, else synthetic.
    pub fn resolve(path: Option<&Path>, config: &SimulationConfig) -> Result<Self, ForgeError> {
        match path {
            Some(p) => Self::from_csv(p, config),
            None => Self::synthetic(config),
        }
    }
}

pub fn read_rows<R: std::io::Read>(
    reader: R,
    dim: usize,
    path: &Path,
) -> Result<Vec<LabeledEmbedding>, ForgeError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (i, record) in csv.records().enumerate() {
        let line = i + 1;
        let bad = |message: String| ForgeError::EmbeddingRow {
            path: path.into(),
            line,
            message,
        };
        let record = record.map_err(|source| ForgeError::Csv {
            path: path.into(),
            source,
        })?;
        let mut fields = record.iter();
        let tag: usize = fields.next().unwrap_or_default().parse().map_err(|_| {
            bad(format!(
                "tag `{}` is not a non-negative integer",
                &record[0]
            ))
        })?;
        let vector = fields
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| bad(format!("`{f}` is not a number")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if vector.len() != dim {
            return Err(bad(format!("{} values, expected {dim}", vector.len())));
        }
        rows.push(LabeledEmbedding { tag, vector });
    }
    Ok(rows)
}

fn hash_rows(rows: &[LabeledEmbedding]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: [u8; 8]| {
        for b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01B3);
        }
    };
    for r in rows {
        eat((r.tag as u64).to_le_bytes());
        r.vector.iter().for_each(|v| eat(v.to_bits().to_le_bytes()));
    }
    h | 1
}
