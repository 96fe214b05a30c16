use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::{ContextVector, ID_SLOTS, N_TAGS, PROFILE_DIM};
use crate::math::{bce_with_logits, sigmoid, sqrt, tanh};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NeuralError {
    #[error("context has {actual} entries, network expects {expected}")]
    Dimension { expected: usize, actual: usize },
    #[error("parameter vector has {actual} entries, network expects {expected}")]
    ParameterCount { expected: usize, actual: usize },
    #[error("offline sample {index} is not clean: {reason}")]
    Impure { index: usize, reason: &'static str },
    #[error("label of sample {index} is outside [0, 1]")]
    LabelOutOfRange { index: usize },
}

/// Result of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Forward {
    pub logit: f64,
    pub prob: f64,
    /// Hadamard feature `q ⊙ c`.
    pub phi: Vec<f64>,
    pub q: Vec<f64>,
    pub c: Vec<f64>,
}

/// `r̂ = σ(w_h · (tanh(W_q x_q + b_q) ⊙ tanh(W_c x_c + b_c)) + b_h)`.
///
/// Parameters live in one flat vector laid out as
/// `W_q | b_q | W_c | b_c | w_h | b_h`, weight matrices row-major with one
/// row per feature. Gradients use the same layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoTowerNet {
    query_dim: usize,
    feature_dim: usize,
    params: Vec<f64>,
}

impl TwoTowerNet {
    pub fn param_count(query_dim: usize, feature_dim: usize) -> usize {
        feature_dim * (query_dim + 1) + feature_dim * (PROFILE_DIM + 1) + feature_dim + 1
    }

    pub fn zeros(query_dim: usize, feature_dim: usize) -> Self {
        Self {
            query_dim,
            feature_dim,
            params: vec![0.0; Self::param_count(query_dim, feature_dim)],
        }
    }

    /// Uniform `±1/√fan_in` for every weight and bias.
    pub fn random<R: Rng + ?Sized>(query_dim: usize, feature_dim: usize, rng: &mut R) -> Self {
        let mut net = Self::zeros(query_dim, feature_dim);
        let bq = 1.0 / sqrt(query_dim as f64);
        let bc = 1.0 / sqrt(PROFILE_DIM as f64);
        let bh = 1.0 / sqrt(feature_dim as f64);
        let (wq, bq_r, wc, bc_r, wh, bh_r) = net.ranges();
        for (range, bound) in [
            (wq, bq),
            (bq_r, bq),
            (wc, bc),
            (bc_r, bc),
            (wh, bh),
            (bh_r, bh),
        ] {
            for v in &mut net.params[range] {
                *v = rng.random_range(-bound..bound);
            }
        }
        net
    }

    pub fn from_params(
        query_dim: usize,
        feature_dim: usize,
        params: Vec<f64>,
    ) -> Result<Self, NeuralError> {
        let expected = Self::param_count(query_dim, feature_dim);
        if params.len() != expected {
            return Err(NeuralError::ParameterCount {
                expected,
                actual: params.len(),
            });
        }
        Ok(Self {
            query_dim,
            feature_dim,
            params,
        })
    }

    pub fn query_dim(&self) -> usize {
        self.query_dim
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn context_dim(&self) -> usize {
        ContextVector::len_for(self.query_dim)
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    #[allow(clippy::type_complexity)]
    fn ranges(
        &self,
    ) -> (
        core::ops::Range<usize>,
        core::ops::Range<usize>,
        core::ops::Range<usize>,
        core::ops::Range<usize>,
        core::ops::Range<usize>,
        core::ops::Range<usize>,
    ) {
        let d = self.feature_dim;
        let wq = 0..d * self.query_dim;
        let bq = wq.end..wq.end + d;
        let wc = bq.end..bq.end + d * PROFILE_DIM;
        let bc = wc.end..wc.end + d;
        let wh = bc.end..bc.end + d;
        let bh = wh.end..wh.end + 1;
        (wq, bq, wc, bc, wh, bh)
    }

    /// Flat index of contractor-tower weight `(feature, input)`.
    pub fn contractor_weight_index(&self, feature: usize, input: usize) -> usize {
        let (_, bq, ..) = self.ranges();
        bq.end + feature * PROFILE_DIM + input
    }

    fn check(&self, x: &[f64]) -> Result<(), NeuralError> {
        let expected = self.context_dim();
        if x.len() != expected {
            return Err(NeuralError::Dimension {
                expected,
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// Query-tower output `tanh(W_q x_q + b_q)`. Shared by every contractor
    /// scored against the same task.
    pub fn query_embedding(&self, query: &[f64]) -> Vec<f64> {
        let (wq, bq, ..) = self.ranges();
        tower(&self.params[wq], &self.params[bq], query)
    }

    fn contractor_embedding(&self, profile: &[f64]) -> Vec<f64> {
        let (_, _, wc, bc, ..) = self.ranges();
        tower(&self.params[wc], &self.params[bc], profile)
    }

    fn head(&self, q: Vec<f64>, c: Vec<f64>) -> Forward {
        let (.., wh, bh) = self.ranges();
        let phi: Vec<f64> = q.iter().zip(&c).map(|(a, b)| a * b).collect();
        let logit = self.params[bh.start]
            + phi
                .iter()
                .zip(&self.params[wh])
                .map(|(p, w)| p * w)
                .sum::<f64>();
        Forward {
            logit,
            prob: sigmoid(logit),
            phi,
            q,
            c,
        }
    }

    pub fn forward(&self, x: &[f64]) -> Result<Forward, NeuralError> {
        self.check(x)?;
        let q = self.query_embedding(&x[..self.query_dim]);
        let c = self.contractor_embedding(&x[self.query_dim..]);
        Ok(self.head(q, c))
    }

    /// Forward pass reusing a precomputed query embedding.
    pub fn forward_with_query(&self, q: &[f64], x: &[f64]) -> Result<Forward, NeuralError> {
        self.check(x)?;
        let c = self.contractor_embedding(&x[self.query_dim..]);
        Ok(self.head(q.to_vec(), c))
    }

    pub fn loss<'a, I>(&self, batch: I) -> Result<f64, NeuralError>
    where
        I: IntoIterator<Item = (&'a [f64], f64)>,
    {
        let (mut total, mut n) = (0.0, 0usize);
        for (x, r) in batch {
            total += bce_with_logits(self.forward(x)?.logit, r);
            n += 1;
        }
        Ok(if n == 0 { 0.0 } else { total / n as f64 })
    }

    /// Mean BCE-with-logits over the batch and its analytic gradient.
    pub fn loss_and_gradients<'a, I>(&self, batch: I) -> Result<(f64, Vec<f64>), NeuralError>
    where
        I: IntoIterator<Item = (&'a [f64], f64)>,
    {
        let (wq, bq, wc, bc, wh, bh) = self.ranges();
        let d = self.feature_dim;
        let mut grad = vec![0.0; self.params.len()];
        let (mut total, mut n) = (0.0, 0usize);
        let mut dq = vec![0.0; d];
        let mut dc = vec![0.0; d];
        for (x, r) in batch {
            let f = self.forward(x)?;
            total += bce_with_logits(f.logit, r);
            n += 1;
            let g = f.prob - r;
            grad[bh.start] += g;
            for i in 0..d {
                let w = self.params[wh.start + i];
                grad[wh.start + i] += g * f.phi[i];
                dq[i] = g * w * f.c[i] * (1.0 - f.q[i] * f.q[i]);
                dc[i] = g * w * f.q[i] * (1.0 - f.c[i] * f.c[i]);
            }
            let (xq, xc) = x.split_at(self.query_dim);
            accumulate(&mut grad[wq.start..bq.end], &dq, xq);
            accumulate(&mut grad[wc.start..bc.end], &dc, xc);
        }
        if n == 0 {
            return Ok((0.0, grad));
        }
        let inv = 1.0 / n as f64;
        grad.iter_mut().for_each(|g| *g *= inv);
        Ok((total * inv, grad))
    }

    /// Plain gradient step `θ ← θ − lr·g`.
    pub fn apply_gradient(&mut self, grad: &[f64], learning_rate: f64) {
        for (p, g) in self.params.iter_mut().zip(grad) {
            *p -= learning_rate * g;
        }
    }

    /// Redraws the contractor-tower weights reading the id one-hot from
    /// `U(−b, b)` with `b = √(6 / fan_in)`. Nothing else changes.
    pub fn reinit_id_columns<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let bound = Self::kaiming_bound();
        for i in 0..self.feature_dim {
            for j in N_TAGS..N_TAGS + ID_SLOTS {
                let idx = self.contractor_weight_index(i, j);
                self.params[idx] = rng.random_range(-bound..bound);
            }
        }
    }

    pub fn kaiming_bound() -> f64 {
        sqrt(6.0 / PROFILE_DIM as f64)
    }
}

fn tower(w: &[f64], b: &[f64], x: &[f64]) -> Vec<f64> {
    let cols = x.len();
    b.iter()
        .enumerate()
        .map(|(i, bi)| {
            let row = &w[i * cols..(i + 1) * cols];
            tanh(bi + row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>())
        })
        .collect()
}

/// `block` is a weight matrix immediately followed by its bias.
fn accumulate(block: &mut [f64], delta: &[f64], x: &[f64]) {
    let cols = x.len();
    let (gw, gb) = block.split_at_mut(delta.len() * cols);
    for (i, di) in delta.iter().enumerate() {
        gb[i] += di;
        if *di == 0.0 {
            continue;
        }
        let row = &mut gw[i * cols..(i + 1) * cols];
        for (g, v) in row.iter_mut().zip(x) {
            *g += di * v;
        }
    }
}
