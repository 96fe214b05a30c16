//! Result files. For a stem `s` the harness writes:
//!
//! - `s.csv`: one row per (policy, cell) with a mean and a std column per metric;
//! - `s_runs.csv`: one row per (policy, cell, seed);
//! - `s.json`: the full result set including the configuration and seeds.
//!
//! Rows are sorted by policy, then cell. Numbers use the shortest
//! representation that parses back to the same `f64`, so files are
//! byte-stable and lossless.

use std::path::{Path, PathBuf};

use forge_core::experiment::{CellResult, GridResult, METRIC_NAMES};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::ForgeError;

/// Leading columns of both CSV files. In the table `seed` is the base seed
/// the run seeds were derived from; in the per-run file it is the run seed.
const COORDINATES: [&str; 7] = [
    "policy",
    "label",
    "cell",
    "omega_surge",
    "sigma_noise",
    "rho_turnover",
    "seed",
];

/// Identifies the producing build in JSON artifacts.
pub fn build_id() -> String {
    match option_env!("FORGE_BUILD_ID") {
        Some(id) => format!("forge {} ({id})", env!("CARGO_PKG_VERSION")),
        None => format!("forge {}", env!("CARGO_PKG_VERSION")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub build: String,
    /// Grid id, or `None` for a single `forge run`.
    pub experiment: Option<u8>,
    pub config: RunConfig,
    pub seeds: Vec<u64>,
    pub rows: Vec<CellResult>,
}

impl ResultSet {
    pub fn new(experiment: Option<u8>, config: RunConfig, grid: GridResult) -> Self {
        let mut rows = grid.rows;
        rows.sort_by_key(|r| (r.policy, r.cell));
        Self {
            build: build_id(),
            experiment,
            config,
            seeds: grid.seeds,
            rows,
        }
    }

    pub fn table_csv(&self) -> String {
        let mut header: Vec<String> = COORDINATES.iter().map(|c| c.to_string()).collect();
        for m in METRIC_NAMES {
            header.push(format!("{m}_mean"));
            header.push(format!("{m}_std"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut rec = self.coordinates(r);
            rec.push(self.config.simulation.seed.to_string());
            for (m, s) in r.report.mean.values().iter().zip(r.report.std.values()) {
                rec.push(m.to_string());
                rec.push(s.to_string());
            }
            w.write_record(&rec).expect("in-memory write");
        }
        into_string(w)
    }

    pub fn runs_csv(&self) -> String {
        let mut header: Vec<String> = COORDINATES.iter().map(|c| c.to_string()).collect();
        header.extend(METRIC_NAMES.iter().map(|m| m.to_string()));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            for (seed, m) in r.report.seeds.iter().zip(&r.report.per_seed) {
                let mut rec = self.coordinates(r);
                rec.push(seed.to_string());
                rec.extend(m.values().iter().map(f64::to_string));
                w.write_record(&rec).expect("in-memory write");
            }
        }
        into_string(w)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result set serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, origin: &Path) -> Result<Self, ForgeError> {
        serde_json::from_str(text).map_err(|source| ForgeError::Json {
            path: origin.into(),
            source,
        })
    }

    /// Writes the three files for `stem` into `dir` (created if missing).
    pub fn write(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>, ForgeError> {
        std::fs::create_dir_all(dir).map_err(|e| ForgeError::io(dir, e))?;
        let files = [
            (dir.join(format!("{stem}.csv")), self.table_csv()),
            (dir.join(format!("{stem}_runs.csv")), self.runs_csv()),
            (dir.join(format!("{stem}.json")), self.to_json()),
        ];
        let mut written = Vec::new();
        for (path, body) in files {
            std::fs::write(&path, body).map_err(|e| ForgeError::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }

    fn coordinates(&self, r: &CellResult) -> Vec<String> {
        vec![
            r.policy.name().to_string(),
            r.policy.label().to_string(),
            r.cell.to_string(),
            r.stress.omega_surge.to_string(),
            r.stress.sigma_noise.to_string(),
            r.stress.rho_turnover.to_string(),
        ]
    }
}

fn into_string(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
