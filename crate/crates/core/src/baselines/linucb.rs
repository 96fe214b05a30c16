//! Disjoint LinUCB: one ridge model per contractor over the full context.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::math::{argmax_first, dot, sqrt};
use crate::policy::{Allocator, Observation};

/// Ridge model of one arm, `A = λI + XᵀX`, `b = Xᵀr`, kept in dual form.
///
/// Arms see few pulls relative to the context width, so instead of the
/// `d × d` inverse we keep the pulled rows and `M = (λI + XXᵀ)⁻¹`
/// (`n × n`). Then `A⁻¹ = (I − XᵀMX)/λ` and `θ̂ = XᵀMr`, and scoring costs
/// `O(nd + n²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmModel {
    lambda: f64,
    dim: usize,
    xs: VecDeque<Vec<f64>>,
    rs: VecDeque<f64>,
    /// Row-major `n × n`.
    m: Vec<f64>,
    /// `M r`.
    w: Vec<f64>,
}

impl ArmModel {
    pub fn new(dim: usize, lambda: f64) -> Self {
        Self {
            lambda,
            dim,
            xs: VecDeque::new(),
            rs: VecDeque::new(),
            m: Vec::new(),
            w: Vec::new(),
        }
    }

    pub fn pulls(&self) -> usize {
        self.xs.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn kernel(&self, x: &[f64]) -> Vec<f64> {
        self.xs.iter().map(|xi| dot(xi, x)).collect()
    }

    fn m_mul(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|i| dot(&self.m[i * n..(i + 1) * n], v))
            .collect()
    }

    fn refresh_w(&mut self) {
        let r: Vec<f64> = self.rs.iter().copied().collect();
        self.w = self.m_mul(&r);
    }

    /// `θ̂ = A⁻¹b`.
    pub fn theta(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.dim];
        for (xi, wi) in self.xs.iter().zip(&self.w) {
            for (tj, xj) in t.iter_mut().zip(xi) {
                *tj += wi * xj;
            }
        }
        t
    }

    /// Dense `A⁻¹`, for inspection and tests.
    pub fn a_inv(&self) -> Matrix {
        let n = self.xs.len();
        let mut out = Matrix::scaled_identity(self.dim, 1.0 / self.lambda);
        for i in 0..n {
            for j in 0..n {
                let mij = self.m[i * n + j];
                if mij == 0.0 {
                    continue;
                }
                let (xi, xj) = (&self.xs[i], &self.xs[j]);
                for p in 0..self.dim {
                    if xi[p] == 0.0 {
                        continue;
                    }
                    let s = mij * xi[p] / self.lambda;
                    for q in 0..self.dim {
                        let v = out.get(p, q) - s * xj[q];
                        out.set(p, q, v);
                    }
                }
            }
        }
        out
    }

    /// `(x·θ̂, √(xᵀA⁻¹x))`.
    pub fn mean_and_width(&self, x: &[f64]) -> (f64, f64) {
        let k = self.kernel(x);
        let mean = dot(&k, &self.w);
        let mk = self.m_mul(&k);
        let var = (dot(x, x) - dot(&k, &mk)) / self.lambda;
        (mean, sqrt(var.max(0.0)))
    }

    /// Adds one `(x, r)` by bordering `M`.
    pub fn update(&mut self, x: &[f64], reward: f64) {
        let n = self.xs.len();
        let g = self.kernel(x);
        let u = self.m_mul(&g);
        let s = self.lambda + dot(x, x) - dot(&g, &u);
        let mut m = vec![0.0; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                m[i * (n + 1) + j] = self.m[i * n + j] + u[i] * u[j] / s;
            }
            m[i * (n + 1) + n] = -u[i] / s;
            m[n * (n + 1) + i] = -u[i] / s;
        }
        m[n * (n + 1) + n] = 1.0 / s;
        self.m = m;
        self.xs.push_back(x.to_vec());
        self.rs.push_back(reward);
        self.refresh_w();
    }

    /// Drops the oldest observation (inverse of a principal submatrix).
    pub fn remove_oldest(&mut self) {
        let n = self.xs.len();
        if n == 0 {
            return;
        }
        let p = self.m[0];
        let mut m = vec![0.0; (n - 1) * (n - 1)];
        for i in 1..n {
            for j in 1..n {
                m[(i - 1) * (n - 1) + (j - 1)] = self.m[i * n + j] - self.m[i * n] * self.m[j] / p;
            }
        }
        self.m = m;
        self.xs.pop_front();
        self.rs.pop_front();
        self.refresh_w();
    }
}

#[derive(Debug, Clone)]
pub struct LinUcb {
    alpha: f64,
    lambda: f64,
    arms: Vec<Option<ArmModel>>,
}

impl LinUcb {
    pub fn new(num_arms: usize, alpha: f64, lambda: f64) -> Self {
        Self {
            alpha,
            lambda,
            arms: vec![None; num_arms],
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn arm(&self, k: usize) -> Option<&ArmModel> {
        self.arms[k].as_ref()
    }

    pub(crate) fn arm_slot(&mut self, k: usize) -> &mut Option<ArmModel> {
        &mut self.arms[k]
    }

    pub fn score(&self, k: usize, x: &[f64]) -> f64 {
        match &self.arms[k] {
            Some(m) => {
                let (mean, width) = m.mean_and_width(x);
                mean + self.alpha * width
            }
            // untouched arm: θ̂ = 0, A⁻¹ = I/λ
            None => self.alpha * sqrt(dot(x, x) / self.lambda),
        }
    }

    pub fn select_from<X: AsRef<[f64]>>(&self, contexts: &[X]) -> usize {
        argmax_first(
            contexts
                .iter()
                .enumerate()
                .map(|(k, x)| self.score(k, x.as_ref())),
        )
        .expect("non-empty pool")
    }

    pub fn update_arm(&mut self, k: usize, x: &[f64], reward: f64) {
        let lambda = self.lambda;
        self.arms[k]
            .get_or_insert_with(|| ArmModel::new(x.len(), lambda))
            .update(x, reward);
    }
}

impl Allocator for LinUcb {
    fn name(&self) -> &'static str {
        "linucb"
    }

    fn select(&mut self, obs: &Observation<'_>) -> usize {
        argmax_first(
            obs.contexts
                .iter()
                .enumerate()
                .map(|(k, x)| self.score(k, x.as_slice())),
        )
        .expect("non-empty pool")
    }

    fn update(&mut self, obs: &Observation<'_>, selected: usize, reward: f64) {
        self.update_arm(selected, obs.contexts[selected].as_slice(), reward);
    }
}
