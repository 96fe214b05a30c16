use alloc::vec::Vec;

use crate::math::argmax_first;

/// TOPSIS weight `η` with multiplicative decay, and the UCB coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionState {
    pub eta: f64,
    pub delta: f64,
    pub beta: f64,
}

impl FusionState {
    pub fn new(eta0: f64, delta: f64, beta: f64) -> Self {
        Self {
            eta: eta0,
            delta,
            beta,
        }
    }

    /// `η ← max(η·δ, 0)`.
    pub fn decay(&mut self) {
        self.eta = (self.eta * self.delta).max(0.0);
    }
}

/// `U_k = r̂_k + β·σ_k + η·C_k` over eligible contractors, `−∞` elsewhere.
/// Falls back to every contractor when none is eligible. Lowest index wins
/// ties. Returns the choice and every score.
pub fn fused_score_and_select(
    r_hat: &[f64],
    width: &[f64],
    closeness: &[f64],
    eligible: &[bool],
    fusion: &FusionState,
) -> (usize, Vec<f64>) {
    let any = eligible.iter().any(|e| *e);
    let scores: Vec<f64> = (0..r_hat.len())
        .map(|k| {
            if any && !eligible[k] {
                f64::NEG_INFINITY
            } else {
                r_hat[k] + fusion.beta * width[k] + fusion.eta * closeness[k]
            }
        })
        .collect();
    let pick = argmax_first(scores.iter().copied()).expect("non-empty pool");
    (pick, scores)
}
