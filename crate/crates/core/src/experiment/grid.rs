use alloc::boxed::Box;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::config::{SimulationConfig, StressConfig};
use crate::embedding::EmbeddingSpace;
use crate::hybrid::PhysicsPrior;
use crate::rng::mix_seed;

use super::episode::run_policy;
use super::kind::PolicyKind;
use super::metrics::{compute_metrics, MetricsReport};
use super::ExperimentError;

/// Policies × stress cells × repeats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentGrid {
    pub experiment: u8,
    pub policies: Vec<PolicyKind>,
    pub cells: Vec<StressConfig>,
    pub repeats: usize,
    pub base_seed: u64,
}

const GRID_POLICIES: [PolicyKind; 3] = [
    PolicyKind::Topsis,
    PolicyKind::Hybrid,
    PolicyKind::HybridPrior,
];

impl ExperimentGrid {
    /// Every policy, no stress, 5 seeds.
    pub fn experiment1(base_seed: u64) -> Self {
        Self {
            experiment: 1,
            policies: PolicyKind::ALL.to_vec(),
            cells: alloc::vec![StressConfig::default()],
            repeats: 5,
            base_seed,
        }
    }

    /// Turnover {0, 10, 30, 50}% × noise {0, 0.05, 0.10, 0.20}.
    pub fn experiment2(base_seed: u64) -> Self {
        let mut cells = Vec::new();
        for rho in [0.0, 0.1, 0.3, 0.5] {
            for sigma in [0.0, 0.05, 0.10, 0.20] {
                cells.push(StressConfig {
                    rho_turnover: rho,
                    sigma_noise: sigma,
                    ..StressConfig::default()
                });
            }
        }
        Self {
            experiment: 2,
            policies: GRID_POLICIES.to_vec(),
            cells,
            repeats: 10,
            base_seed,
        }
    }

    /// Surge {1.0, 1.5, 2.0} × noise {0, 0.10, 0.20}.
    pub fn experiment3(base_seed: u64) -> Self {
        let mut cells = Vec::new();
        for omega in [1.0, 1.5, 2.0] {
            for sigma in [0.0, 0.10, 0.20] {
                cells.push(StressConfig {
                    omega_surge: omega,
                    sigma_noise: sigma,
                    ..StressConfig::default()
                });
            }
        }
        Self {
            experiment: 3,
            policies: GRID_POLICIES.to_vec(),
            cells,
            repeats: 10,
            base_seed,
        }
    }

    pub fn by_id(experiment: u8, base_seed: u64) -> Option<Self> {
        match experiment {
            1 => Some(Self::experiment1(base_seed)),
            2 => Some(Self::experiment2(base_seed)),
            3 => Some(Self::experiment3(base_seed)),
            _ => None,
        }
    }

    /// Run seed of repeat `r`. Identical across cells and policies, so
    /// every cell of a grid sees the same workforces, tasks and outcome
    /// draws and differs only in the stress applied.
    pub fn seed(&self, repeat: usize) -> u64 {
        mix_seed(self.base_seed, &[repeat as u64])
    }

    pub fn seeds(&self) -> Vec<u64> {
        (0..self.repeats).map(|r| self.seed(r)).collect()
    }

    /// Runs every (policy, cell, repeat). `on_cell` is called after each
    /// finished cell, e.g. for progress output.
    pub fn run(
        &self,
        config: &SimulationConfig,
        space: &EmbeddingSpace,
        prior: Option<&PhysicsPrior>,
        mut on_cell: impl FnMut(&CellResult),
    ) -> Result<GridResult, ExperimentError> {
        let mut rows = Vec::with_capacity(self.policies.len() * self.cells.len());
        for &policy in &self.policies {
            for (cell, stress) in self.cells.iter().enumerate() {
                let mut logs = Vec::with_capacity(self.repeats);
                for repeat in 0..self.repeats {
                    let log = run_policy(config, space, policy, prior, self.seed(repeat), stress)
                        .map_err(|e| ExperimentError::Cell {
                        experiment: self.experiment,
                        policy: policy.name(),
                        cell,
                        repeat,
                        source: Box::new(e),
                    })?;
                    logs.push(log);
                }
                let report = compute_metrics(&logs)?;
                let row = CellResult {
                    policy,
                    cell,
                    stress: *stress,
                    report,
                };
                on_cell(&row);
                rows.push(row);
            }
        }
        Ok(GridResult {
            experiment: self.experiment,
            seeds: self.seeds(),
            rows,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub policy: PolicyKind,
    pub cell: usize,
    pub stress: StressConfig,
    pub report: MetricsReport,
}

/// Rows ordered by policy, then cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub experiment: u8,
    pub seeds: Vec<u64>,
    pub rows: Vec<CellResult>,
}

impl GridResult {
    pub fn row(&self, policy: PolicyKind, cell: usize) -> Option<&CellResult> {
        self.rows
            .iter()
            .find(|r| r.policy == policy && r.cell == cell)
    }
}
