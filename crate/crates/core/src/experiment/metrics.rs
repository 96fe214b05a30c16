use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math::sqrt;

use super::episode::EpisodeLog;
use super::kind::PolicyKind;
use super::ExperimentError;

pub const METRIC_NAMES: [&str; 8] = ["ERew", "EReg", "LRew", "LReg", "Burn", "Util", "SMR", "MPF"];

/// Early window `[1, 100]` and late window `[150, 200]`, 1-indexed and
/// inclusive. Both bounds are clamped into `[1, T]`.
const EARLY: (usize, usize) = (1, 100);
const LATE: (usize, usize) = (150, 200);

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct RunMetrics {
    pub ERew: f64,
    pub EReg: f64,
    pub LRew: f64,
    pub LReg: f64,
    pub Burn: f64,
    pub Util: f64,
    pub SMR: f64,
    pub MPF: f64,
}

impl RunMetrics {
    pub fn values(&self) -> [f64; 8] {
        [
            self.ERew, self.EReg, self.LRew, self.LReg, self.Burn, self.Util, self.SMR, self.MPF,
        ]
    }

    pub fn from_values(v: [f64; 8]) -> Self {
        Self {
            ERew: v[0],
            EReg: v[1],
            LRew: v[2],
            LReg: v[3],
            Burn: v[4],
            Util: v[5],
            SMR: v[6],
            MPF: v[7],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub policy: PolicyKind,
    pub seeds: Vec<u64>,
    pub per_seed: Vec<RunMetrics>,
    pub mean: RunMetrics,
    /// Sample (n − 1) standard deviation; 0 for a single seed.
    pub std: RunMetrics,
}

impl MetricsReport {
    pub fn label(&self) -> String {
        String::from(self.policy.label())
    }
}

fn window(len: usize, (lo, hi): (usize, usize)) -> core::ops::Range<usize> {
    let hi = hi.min(len);
    let lo = lo.min(hi.max(1));
    (lo - 1).min(hi)..hi
}

/// Metrics of a single run.
pub fn run_metrics(log: &EpisodeLog) -> RunMetrics {
    let steps = &log.steps;
    let n = steps.len();
    if n == 0 {
        return RunMetrics::default();
    }
    let reward = |r: core::ops::Range<usize>| {
        let len = r.len();
        if len == 0 {
            0.0
        } else {
            steps[r].iter().map(|s| s.p_actual).sum::<f64>() / len as f64
        }
    };
    let regret = |r: core::ops::Range<usize>| {
        steps[r]
            .iter()
            .map(|s| s.oracle_value - s.p_actual)
            .sum::<f64>()
    };
    let (early, late) = (window(n, EARLY), window(n, LATE));
    let mut picked: Vec<usize> = steps.iter().map(|s| s.selected).collect();
    picked.sort_unstable();
    picked.dedup();
    RunMetrics {
        ERew: reward(early.clone()),
        EReg: regret(early),
        LRew: reward(late.clone()),
        LReg: regret(late),
        Burn: steps.iter().filter(|s| s.burnout).count() as f64,
        Util: picked.len() as f64,
        SMR: 100.0 * steps.iter().filter(|s| s.availability < 1.0).count() as f64 / n as f64,
        MPF: steps.iter().map(|s| s.fatigue).sum::<f64>() / n as f64,
    }
}

/// Per-seed metrics plus mean and sample std across seeds.
pub fn compute_metrics(logs: &[EpisodeLog]) -> Result<MetricsReport, ExperimentError> {
    let first = logs.first().ok_or(ExperimentError::NoLogs)?;
    let per_seed: Vec<RunMetrics> = logs.iter().map(run_metrics).collect();
    let n = per_seed.len() as f64;
    let mut mean = [0.0; 8];
    for m in &per_seed {
        for (acc, v) in mean.iter_mut().zip(m.values()) {
            *acc += v / n;
        }
    }
    let mut std = [0.0; 8];
    if per_seed.len() > 1 {
        for m in &per_seed {
            for ((acc, v), mu) in std.iter_mut().zip(m.values()).zip(mean) {
                *acc += (v - mu) * (v - mu);
            }
        }
        std.iter_mut().for_each(|s| *s = sqrt(*s / (n - 1.0)));
    }
    Ok(MetricsReport {
        policy: first.policy,
        seeds: logs.iter().map(|l| l.seed).collect(),
        per_seed,
        mean: RunMetrics::from_values(mean),
        std: RunMetrics::from_values(std),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::StepRecord;
    use alloc::vec;

    fn step(selected: usize, fatigue: f64, availability: f64, gap: f64) -> StepRecord {
        StepRecord {
            selected,
            outcome: 1.0,
            fatigue,
            availability,
            p_actual: 0.5,
            oracle: 0,
            oracle_value: 0.5 + gap,
            burnout: fatigue > 0.8,
        }
    }

    #[test]
    fn four_step_example() {
        let log = EpisodeLog {
            policy: PolicyKind::Topsis,
            seed: 0,
            steps: vec![
                step(0, 0.1, 1.0, 0.1),
                step(1, 0.2, 1.0, 0.0),
                step(1, 0.3, 0.5, 0.2),
                step(2, 0.4, 1.0, 0.1),
            ],
            replaced: vec![],
        };
        let m = run_metrics(&log);
        assert!((m.MPF - 0.25).abs() < 1e-15);
        assert_eq!(m.SMR, 25.0);
        assert!((m.EReg - 0.4).abs() < 1e-12);
        assert_eq!(m.Util, 3.0);
        assert_eq!(m.Burn, 0.0);
        // both late bounds clamp to T, leaving only the last step
        assert!((m.LReg - 0.1).abs() < 1e-12);
    }

    #[test]
    fn full_availability_means_zero_smr() {
        let log = EpisodeLog {
            policy: PolicyKind::Topsis,
            seed: 0,
            steps: vec![step(0, 0.1, 1.0, 0.0); 5],
            replaced: vec![],
        };
        assert_eq!(run_metrics(&log).SMR, 0.0);
    }

    #[test]
    fn windows_are_inclusive() {
        assert_eq!(window(200, EARLY), 0..100);
        assert_eq!(window(200, LATE), 149..200);
        assert_eq!(window(50, EARLY), 0..50);
        assert_eq!(window(120, LATE), 119..120);
    }

    #[test]
    fn sample_std_across_seeds() {
        let mk = |seed, f| EpisodeLog {
            policy: PolicyKind::Topsis,
            seed,
            steps: vec![step(0, f, 1.0, 0.0)],
            replaced: vec![],
        };
        let r = compute_metrics(&[mk(0, 0.2), mk(1, 0.4)]).unwrap();
        assert!((r.mean.MPF - 0.3).abs() < 1e-15);
        assert!((r.std.MPF - sqrt(0.02)).abs() < 1e-15);
        assert!(compute_metrics(&[]).is_err());
    }
}
