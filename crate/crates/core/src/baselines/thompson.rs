//! Linear Thompson sampling with a single shared weight vector.
//!
//! The gram `A = λI + Σ x xᵀ` is kept as a Cholesky factor updated in
//! `O(d²)` per observation; the posterior is `N(A⁻¹b, v·A⁻¹)`.

use alloc::vec::Vec;

use crate::linalg::Cholesky;
use crate::math::{argmax_first, dot, sqrt};
use crate::policy::{Allocator, Observation};
use crate::rng::{standard_normal, SimRng};

#[derive(Debug, Clone)]
pub struct ThompsonSampling {
    gram: Cholesky,
    b: Vec<f64>,
    noise_var: f64,
    rng: SimRng,
    observations: usize,
}

impl ThompsonSampling {
    pub fn new(dim: usize, lambda: f64, noise_var: f64, rng: SimRng) -> Self {
        Self {
            gram: Cholesky::scaled_identity(dim, lambda),
            b: alloc::vec![0.0; dim],
            noise_var,
            rng,
            observations: 0,
        }
    }

    pub fn observations(&self) -> usize {
        self.observations
    }

    pub fn posterior_mean(&self) -> Vec<f64> {
        self.gram.solve(&self.b)
    }

    pub fn gram_factor(&self) -> &Cholesky {
        &self.gram
    }

    /// Draw `θ̃ = μ + √v · L⁻ᵀ z` with `z ~ N(0, I)`, so `Cov θ̃ = v A⁻¹`.
    pub fn sample_weights(&mut self) -> Vec<f64> {
        let mut theta = self.posterior_mean();
        if self.noise_var > 0.0 {
            let z: Vec<f64> = (0..theta.len())
                .map(|_| standard_normal(&mut self.rng))
                .collect();
            let offset = self.gram.solve_upper_transposed(&z);
            let s = sqrt(self.noise_var);
            for (t, o) in theta.iter_mut().zip(offset) {
                *t += s * o;
            }
        }
        theta
    }

    pub fn select_from<X: AsRef<[f64]>>(&mut self, contexts: &[X]) -> usize {
        let theta = self.sample_weights();
        argmax_first(contexts.iter().map(|x| dot(x.as_ref(), &theta))).expect("non-empty pool")
    }

    pub fn observe(&mut self, x: &[f64], reward: f64) {
        self.gram.rank_one_update(x);
        for (b, xi) in self.b.iter_mut().zip(x) {
            *b += reward * xi;
        }
        self.observations += 1;
    }
}

impl Allocator for ThompsonSampling {
    fn name(&self) -> &'static str {
        "thompson"
    }

    fn select(&mut self, obs: &Observation<'_>) -> usize {
        let theta = self.sample_weights();
        argmax_first(obs.contexts.iter().map(|x| dot(x.as_slice(), &theta)))
            .expect("non-empty pool")
    }

    fn update(&mut self, obs: &Observation<'_>, selected: usize, reward: f64) {
        self.observe(obs.contexts[selected].as_slice(), reward);
    }
}
