//! Independent reference implementations used as test oracles. Nothing here
//! calls into the crate's own linear algebra.
#![allow(dead_code)]

pub mod reference;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Dense row-major square matrix as nested vectors.
pub type Dense = Vec<Vec<f64>>;

pub fn scaled_identity(n: usize, s: f64) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { s } else { 0.0 }).collect())
        .collect()
}

pub fn add_outer(a: &mut Dense, x: &[f64]) {
    for (i, row) in a.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v += x[i] * x[j];
        }
    }
}

/// Gauss–Jordan elimination with partial pivoting.
pub fn invert(a: &Dense) -> Dense {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        let p = m[col][col];
        assert!(p.abs() > 1e-300, "singular matrix");
        for v in m[col].iter_mut() {
            *v /= p;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col {
                let f = row[col];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn mat_vec(a: &Dense, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

pub fn frobenius(a: &Dense, b: &[f64]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let d = a[i][j] - b[i * n + j];
            s += d * d;
        }
    }
    s.sqrt()
}

/// Batch ridge solution `(λI + XᵀX)⁻¹ Xᵀy`.
pub fn ridge(xs: &[Vec<f64>], ys: &[f64], lambda: f64) -> Vec<f64> {
    let d = xs[0].len();
    let mut a = scaled_identity(d, lambda);
    let mut b = vec![0.0; d];
    for (x, y) in xs.iter().zip(ys) {
        add_outer(&mut a, x);
        for (bi, xi) in b.iter_mut().zip(x) {
            *bi += y * xi;
        }
    }
    mat_vec(&invert(&a), &b)
}

/// Textbook TOPSIS written out loop by loop.
pub fn brute_topsis(m: &[Vec<f64>], w: &[f64], benefit: &[bool]) -> Vec<f64> {
    let rows = m.len();
    let cols = m[0].len();
    let mut v = vec![vec![0.0; cols]; rows];
    for j in 0..cols {
        let mut sq = 0.0;
        for row in m {
            sq += row[j] * row[j];
        }
        let norm = sq.sqrt();
        for i in 0..rows {
            v[i][j] = if norm > 0.0 {
                w[j] * m[i][j] / norm
            } else {
                0.0
            };
        }
    }
    let mut best = vec![0.0; cols];
    let mut worst = vec![0.0; cols];
    for j in 0..cols {
        let mut hi = f64::MIN;
        let mut lo = f64::MAX;
        for row in &v {
            hi = hi.max(row[j]);
            lo = lo.min(row[j]);
        }
        if benefit[j] {
            best[j] = hi;
            worst[j] = lo;
        } else {
            best[j] = lo;
            worst[j] = hi;
        }
    }
    let mut out = Vec::new();
    for row in &v {
        let mut dp = 0.0;
        let mut dm = 0.0;
        for j in 0..cols {
            dp += (row[j] - best[j]).powi(2);
            dm += (row[j] - worst[j]).powi(2);
        }
        let (dp, dm) = (dp.sqrt(), dm.sqrt());
        out.push(if dp + dm > 0.0 { dm / (dp + dm) } else { 1.0 });
    }
    out
}
