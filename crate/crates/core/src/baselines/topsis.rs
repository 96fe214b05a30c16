//! TOPSIS closeness coefficients and the TOPSIS allocator.

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::embedding::cosine_similarity;
use crate::math::{argmax_first, sqrt};
use crate::policy::{Allocator, Observation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Larger is better.
    Benefit,
    /// Smaller is better.
    Cost,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopsisError {
    #[error("decision matrix has no rows")]
    Empty,
    #[error("row {row} has {actual} columns, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        actual: usize,
    },
    #[error("{weights} weights and {criteria} criteria for {columns} columns")]
    WeightCount {
        weights: usize,
        criteria: usize,
        columns: usize,
    },
}

/// Criteria of the allocator's decision matrix: similarity of the query to
/// the contractor's tag centre, reputation, base price, latency.
pub const TOPSIS_CRITERIA: [Criterion; 4] = [
    Criterion::Benefit,
    Criterion::Benefit,
    Criterion::Cost,
    Criterion::Cost,
];
pub const TOPSIS_WEIGHTS: [f64; 4] = [0.25; 4];

/// Closeness `C = d⁻ / (d⁺ + d⁻)` of each row to the ideal point.
///
/// Columns are vector-normalised; an all-zero column contributes nothing.
/// A row that coincides with both ideal and anti-ideal (every row equal)
/// gets `C = 1`, as does a single-row matrix.
pub fn topsis_closeness<R: AsRef<[f64]>>(
    rows: &[R],
    weights: &[f64],
    criteria: &[Criterion],
) -> Result<Vec<f64>, TopsisError> {
    let n = rows.len();
    if n == 0 {
        return Err(TopsisError::Empty);
    }
    let m = rows[0].as_ref().len();
    if weights.len() != m || criteria.len() != m {
        return Err(TopsisError::WeightCount {
            weights: weights.len(),
            criteria: criteria.len(),
            columns: m,
        });
    }
    for (row, r) in rows.iter().enumerate() {
        if r.as_ref().len() != m {
            return Err(TopsisError::Ragged {
                row,
                expected: m,
                actual: r.as_ref().len(),
            });
        }
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let mut scale = vec![0.0; m];
    for (j, s) in scale.iter_mut().enumerate() {
        let norm = sqrt(rows.iter().map(|r| r.as_ref()[j] * r.as_ref()[j]).sum());
        *s = if norm > 0.0 { weights[j] / norm } else { 0.0 };
    }
    let weighted: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.as_ref().iter().zip(&scale).map(|(x, s)| x * s).collect())
        .collect();
    let mut ideal = vec![0.0; m];
    let mut anti = vec![0.0; m];
    for j in 0..m {
        let (lo, hi) = weighted
            .iter()
            .map(|r| r[j])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        match criteria[j] {
            Criterion::Benefit => (ideal[j], anti[j]) = (hi, lo),
            Criterion::Cost => (ideal[j], anti[j]) = (lo, hi),
        }
    }
    Ok(weighted
        .iter()
        .map(|r| {
            let d_plus = sqrt(r.iter().zip(&ideal).map(|(a, b)| (a - b) * (a - b)).sum());
            let d_minus = sqrt(r.iter().zip(&anti).map(|(a, b)| (a - b) * (a - b)).sum());
            let total = d_plus + d_minus;
            if total > 0.0 {
                d_minus / total
            } else {
                1.0
            }
        })
        .collect())
}

/// Closeness for every contractor in `obs`, computed over the tag-eligible
/// rows only. Ineligible contractors get 0.
///
/// Only static attributes and reputation enter, never fatigue,
/// availability or the noisy observed price.
pub fn closeness_for(obs: &Observation<'_>) -> Vec<f64> {
    let eligible = obs.eligible();
    let rows: Vec<[f64; 4]> = eligible
        .iter()
        .map(|&k| {
            let c = &obs.contractors[k];
            let sim = cosine_similarity(&obs.task.query, obs.space.center(c.tag)).unwrap_or(0.0);
            [sim, obs.states[k].reputation, c.base_price, c.latency_ms]
        })
        .collect();
    let scores =
        topsis_closeness(&rows, &TOPSIS_WEIGHTS, &TOPSIS_CRITERIA).expect("well-formed matrix");
    let mut out = vec![0.0; obs.contractors.len()];
    for (k, c) in eligible.into_iter().zip(scores) {
        out[k] = c;
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct Topsis;

impl Allocator for Topsis {
    fn name(&self) -> &'static str {
        "topsis"
    }

    fn select(&mut self, obs: &Observation<'_>) -> usize {
        let eligible = obs.eligible();
        let c = closeness_for(obs);
        let best = argmax_first(eligible.iter().map(|&k| c[k])).expect("non-empty pool");
        eligible[best]
    }

    fn update(&mut self, _obs: &Observation<'_>, _selected: usize, _reward: f64) {}
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_and_anti_ideal_rows() {
        let rows = [[1.0, 1.0, 10.0], [0.5, 0.5, 20.0]];
        let crit = [Criterion::Benefit, Criterion::Benefit, Criterion::Cost];
        let c = topsis_closeness(&rows, &[1.0; 3], &crit).unwrap();
        assert_eq!(c, vec![1.0, 0.0]);
    }

    #[test]
    fn degenerate_matrices() {
        let one = [[0.3, 0.2, 20.0, 50.0]];
        assert_eq!(
            topsis_closeness(&one, &TOPSIS_WEIGHTS, &TOPSIS_CRITERIA).unwrap(),
            vec![1.0]
        );
        let same = [[0.3, 0.2, 20.0, 50.0]; 3];
        assert_eq!(
            topsis_closeness(&same, &TOPSIS_WEIGHTS, &TOPSIS_CRITERIA).unwrap(),
            vec![1.0; 3]
        );
        let empty: [[f64; 4]; 0] = [];
        assert_eq!(
            topsis_closeness(&empty, &TOPSIS_WEIGHTS, &TOPSIS_CRITERIA),
            Err(TopsisError::Empty)
        );
        let zero_col = [[0.0, 0.9], [0.0, 0.1]];
        let c = topsis_closeness(&zero_col, &[0.5, 0.5], &[Criterion::Benefit; 2]).unwrap();
        assert_eq!(c, vec![1.0, 0.0]);
    }

    #[test]
    fn closeness_is_bounded() {
        let rows = [
            [0.9, 0.8, 20.0, 50.0],
            [0.5, 0.5, 20.0, 50.0],
            [0.7, 0.9, 40.0, 50.0],
        ];
        for c in topsis_closeness(&rows, &TOPSIS_WEIGHTS, &TOPSIS_CRITERIA).unwrap() {
            assert!((0.0..=1.0).contains(&c));
        }
    }
}
