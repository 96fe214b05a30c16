//! Synthetic skill-cluster embedding space.
//!
//! Each of the five tags owns a unit centre. All centres share a common
//! component (`shared_component` is their pairwise cosine), which keeps
//! cross-tag similarity positive but well below within-tag similarity.
//! A contractor's hidden capability sits at cosine `a_k` from its tag
//! centre, with `a_k` drawn per contractor; the spread of `a_k` is what
//! makes a handful of contractors per tag clearly better than the rest.
//! Task queries sit at a fixed cosine `task_alignment` from their centre.

use alloc::vec::Vec;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, SimulationConfig};
use crate::env::{Contractor, Task, N_TAGS};
use crate::math::{dot, norm, normalize, sigmoid, sqrt};
use crate::rng::standard_normal;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbeddingError {
    #[error("cosine similarity of a zero vector is undefined")]
    ZeroVector,
    #[error("embedding dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("tag {0} is outside 0..5")]
    UnknownTag(usize),
    #[error("no embedding rows carry tag {0}")]
    EmptyTag(usize),
    #[error("expected {expected} embedding rows (one per contractor), got {actual}")]
    RowCount { expected: usize, actual: usize },
    #[error("embedding space needs dim > {0}")]
    DimensionTooSmall(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbeddingParams {
    /// Pairwise cosine between tag centres.
    pub shared_component: f64,
    /// Mean cosine of a contractor capability to its tag centre.
    pub skill_mean: f64,
    pub skill_spread: f64,
    pub skill_min: f64,
    pub skill_max: f64,
    /// Cosine of every task query to its tag centre.
    pub task_alignment: f64,
}

impl Default for EmbeddingParams {
    fn default() -> Self {
        Self {
            shared_component: 0.4,
            skill_mean: 0.7,
            skill_spread: 0.12,
            skill_min: 0.3,
            skill_max: 0.95,
            task_alignment: 0.9,
        }
    }
}

impl EmbeddingParams {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |field, reason| Err(ConfigError::Invalid { field, reason });
        if !(self.shared_component >= 0.0 && self.shared_component < 0.5) {
            return bad(
                "embedding.shared_component",
                "must lie in [0, 0.5) to keep clusters separable",
            );
        }
        if !(self.skill_min > 0.0 && self.skill_min <= self.skill_max && self.skill_max < 1.0) {
            return bad("embedding.skill_min", "need 0 < skill_min <= skill_max < 1");
        }
        if !(self.skill_spread >= 0.0) {
            return bad("embedding.skill_spread", "must be non-negative");
        }
        if !(self.task_alignment > 0.0 && self.task_alignment <= 1.0) {
            return bad("embedding.task_alignment", "must lie in (0, 1]");
        }
        Ok(())
    }
}

/// One externally supplied capability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledEmbedding {
    pub tag: usize,
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSpace {
    dim: usize,
    centers: Vec<Vec<f64>>,
    params: EmbeddingParams,
    capabilities: Option<Vec<LabeledEmbedding>>,
}

fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| standard_normal(rng)).collect();
        if normalize(&mut v) {
            return v;
        }
    }
}

/// Removes the components of `v` along each (unit) vector in `basis`.
fn orthogonalize(v: &mut [f64], basis: &[&[f64]]) {
    for b in basis {
        let p = dot(v, b);
        for (x, y) in v.iter_mut().zip(b.iter()) {
            *x -= p * y;
        }
    }
}

/// Unit vector at cosine `alignment` from the unit vector `center`.
fn sample_at_alignment<R: Rng + ?Sized>(center: &[f64], alignment: f64, rng: &mut R) -> Vec<f64> {
    let dim = center.len();
    let residual = loop {
        let mut n: Vec<f64> = (0..dim).map(|_| standard_normal(rng)).collect();
        orthogonalize(&mut n, &[center]);
        if normalize(&mut n) {
            break n;
        }
    };
    let off = sqrt((1.0 - alignment * alignment).max(0.0));
    let mut v: Vec<f64> = center
        .iter()
        .zip(&residual)
        .map(|(c, r)| alignment * c + off * r)
        .collect();
    normalize(&mut v);
    v
}

impl EmbeddingSpace {
    pub fn generate<R: Rng + ?Sized>(
        dim: usize,
        params: EmbeddingParams,
        rng: &mut R,
    ) -> Result<Self, EmbeddingError> {
        if dim <= N_TAGS {
            return Err(EmbeddingError::DimensionTooSmall(N_TAGS));
        }
        let shared = random_unit(dim, rng);
        let mut directions: Vec<Vec<f64>> = Vec::with_capacity(N_TAGS);
        while directions.len() < N_TAGS {
            let mut u: Vec<f64> = (0..dim).map(|_| standard_normal(rng)).collect();
            let mut basis: Vec<&[f64]> = directions.iter().map(|d| d.as_slice()).collect();
            basis.push(&shared);
            orthogonalize(&mut u, &basis);
            // second pass for numerical orthogonality
            orthogonalize(&mut u, &basis);
            if normalize(&mut u) {
                directions.push(u);
            }
        }
        let rho = params.shared_component;
        let (a, b) = (sqrt(rho), sqrt(1.0 - rho));
        let centers = directions
            .iter()
            .map(|u| {
                let mut c: Vec<f64> = shared.iter().zip(u).map(|(s, x)| a * s + b * x).collect();
                normalize(&mut c);
                c
            })
            .collect();
        Ok(Self {
            dim,
            centers,
            params,
            capabilities: None,
        })
    }

    /// Builds a space from externally computed embeddings. Rows are
    /// normalised and each tag centre is the normalised mean of its rows.
    pub fn from_labeled_rows(
        rows: Vec<LabeledEmbedding>,
        dim: usize,
        params: EmbeddingParams,
    ) -> Result<Self, EmbeddingError> {
        let mut sums = alloc::vec![alloc::vec![0.0; dim]; N_TAGS];
        let mut counts = [0usize; N_TAGS];
        let mut normalized = Vec::with_capacity(rows.len());
        for mut row in rows {
            if row.vector.len() != dim {
                return Err(EmbeddingError::DimensionMismatch {
                    expected: dim,
                    actual: row.vector.len(),
                });
            }
            if row.tag >= N_TAGS {
                return Err(EmbeddingError::UnknownTag(row.tag));
            }
            if !normalize(&mut row.vector) {
                return Err(EmbeddingError::ZeroVector);
            }
            for (s, v) in sums[row.tag].iter_mut().zip(&row.vector) {
                *s += v;
            }
            counts[row.tag] += 1;
            normalized.push(row);
        }
        for (tag, (sum, count)) in sums.iter_mut().zip(counts).enumerate() {
            if count == 0 || !normalize(sum) {
                return Err(EmbeddingError::EmptyTag(tag));
            }
        }
        Ok(Self {
            dim,
            centers: sums,
            params,
            capabilities: Some(normalized),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &EmbeddingParams {
        &self.params
    }

    pub fn center(&self, tag: usize) -> &[f64] {
        &self.centers[tag]
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn loaded_capabilities(&self) -> Option<&[LabeledEmbedding]> {
        self.capabilities.as_deref()
    }

    /// Draws a hidden capability vector for a contractor of `tag`.
    pub fn sample_capability<R: Rng + ?Sized>(&self, tag: usize, rng: &mut R) -> Vec<f64> {
        let p = &self.params;
        let a =
            (p.skill_mean + p.skill_spread * standard_normal(rng)).clamp(p.skill_min, p.skill_max);
        sample_at_alignment(&self.centers[tag], a, rng)
    }

    pub fn sample_task<R: Rng + ?Sized>(&self, rng: &mut R) -> Task {
        let tag = rng.random_range(0..N_TAGS);
        let query = sample_at_alignment(&self.centers[tag], self.params.task_alignment, rng);
        Task { tag, query }
    }
}

/// Cosine similarity `q·φ / (‖q‖‖φ‖)`.
pub fn cosine_similarity(q: &[f64], phi: &[f64]) -> Result<f64, EmbeddingError> {
    if q.len() != phi.len() {
        return Err(EmbeddingError::DimensionMismatch {
            expected: q.len(),
            actual: phi.len(),
        });
    }
    let (nq, np) = (norm(q), norm(phi));
    if nq == 0.0 || np == 0.0 {
        return Err(EmbeddingError::ZeroVector);
    }
    Ok((dot(q, phi) / (nq * np)).clamp(-1.0, 1.0))
}

/// Shifted sigmoid `1 / (1 + exp(-(α s − β)))`.
pub fn base_success_prob(similarity: f64, sharpness: f64, shift: f64) -> f64 {
    sigmoid(sharpness * similarity - shift)
}

/// Creates one contractor with a fresh synthetic capability.
pub fn fresh_contractor<R: Rng + ?Sized>(
    id: usize,
    tag: usize,
    config: &SimulationConfig,
    space: &EmbeddingSpace,
    rng: &mut R,
) -> Contractor {
    let capability = space.sample_capability(tag, rng);
    with_capability(id, tag, capability, config, rng)
}

fn with_capability<R: Rng + ?Sized>(
    id: usize,
    tag: usize,
    capability: Vec<f64>,
    config: &SimulationConfig,
    rng: &mut R,
) -> Contractor {
    let m = &config.market;
    let load = if m.load_max > m.load_min {
        rng.random_range(m.load_min..m.load_max)
    } else {
        m.load_min
    };
    let recovery = if m.recovery_max > m.recovery_min {
        rng.random_range(m.recovery_min..m.recovery_max)
    } else {
        m.recovery_min
    };
    Contractor::new(
        id,
        tag,
        capability,
        load,
        recovery,
        m.base_price,
        m.latency_ms,
        m.supply,
    )
    .expect("generator parameters validated by SimulationConfig::validate")
}

/// Generates the `K`-contractor pool. Tags are assigned round-robin unless
/// the space carries loaded embeddings, in which case row `i` becomes
/// contractor `i` with the row's tag.
pub fn generate_workforce<R: Rng + ?Sized>(
    config: &SimulationConfig,
    space: &EmbeddingSpace,
    rng: &mut R,
) -> Result<Vec<Contractor>, EmbeddingError> {
    let k = config.num_contractors;
    if space.dim != config.query_dim {
        return Err(EmbeddingError::DimensionMismatch {
            expected: config.query_dim,
            actual: space.dim,
        });
    }
    match &space.capabilities {
        Some(rows) => {
            if rows.len() != k {
                return Err(EmbeddingError::RowCount {
                    expected: k,
                    actual: rows.len(),
                });
            }
            Ok(rows
                .iter()
                .enumerate()
                .map(|(id, row)| with_capability(id, row.tag, row.vector.clone(), config, rng))
                .collect())
        }
        None => Ok((0..k)
            .map(|id| fresh_contractor(id, id % N_TAGS, config, space, rng))
            .collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};
    use alloc::vec;

    fn world() -> (SimulationConfig, EmbeddingSpace) {
        let config = SimulationConfig::default();
        let space = EmbeddingSpace::generate(
            config.query_dim,
            config.embedding.clone(),
            &mut stream(config.seed, Stream::World),
        )
        .unwrap();
        (config, space)
    }

    #[test]
    fn cosine_examples() {
        let mut e1 = vec![0.0; 384];
        e1[0] = 1.0;
        let mut e2 = vec![0.0; 384];
        e2[1] = 1.0;
        assert_eq!(cosine_similarity(&e1, &e1).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&e1, &e2).unwrap(), 0.0);
        let mut diag = vec![0.0; 384];
        diag[0] = 1.0 / sqrt(2.0);
        diag[1] = 1.0 / sqrt(2.0);
        assert!(
            (cosine_similarity(&e1, &diag).unwrap() - core::f64::consts::FRAC_1_SQRT_2).abs()
                < 1e-12
        );
        assert_eq!(
            cosine_similarity(&e1, &vec![0.0; 384]),
            Err(EmbeddingError::ZeroVector)
        );
    }

    #[test]
    fn sigmoid_examples() {
        assert_eq!(base_success_prob(2.5 / 6.0, 6.0, 2.5), 0.5);
        assert!((base_success_prob(0.75, 6.0, 2.5) - 0.880_797).abs() < 1e-6);
        assert_eq!(base_success_prob(1e6, 6.0, 2.5), 1.0);
    }

    #[test]
    fn centers_are_unit_and_separable() {
        let (_, space) = world();
        for (i, a) in space.centers().iter().enumerate() {
            assert!((norm(a) - 1.0).abs() < 1e-12);
            for b in &space.centers()[i + 1..] {
                assert!(dot(a, b) < 0.5);
            }
        }
    }

    #[test]
    fn workforce_round_robin_and_unit_norm() {
        let (config, space) = world();
        let pool = generate_workforce(&config, &space, &mut stream(7, Stream::Workforce)).unwrap();
        assert_eq!(pool.len(), 100);
        for tag in 0..N_TAGS {
            assert_eq!(pool.iter().filter(|c| c.tag == tag).count(), 20);
        }
        for c in &pool {
            assert!((norm(&c.capability) - 1.0).abs() < 1e-6);
            assert!(c.base_price == 20.0 && c.latency_ms == 50.0);
        }
    }

    #[test]
    fn within_tag_similarity_exceeds_cross_tag() {
        let (config, space) = world();
        let pool = generate_workforce(&config, &space, &mut stream(3, Stream::Workforce)).unwrap();
        let (mut within, mut nw, mut cross, mut nc) = (0.0, 0, 0.0, 0);
        for (i, a) in pool.iter().enumerate() {
            for b in &pool[i + 1..] {
                let s = dot(&a.capability, &b.capability);
                if a.tag == b.tag {
                    within += s;
                    nw += 1;
                } else {
                    cross += s;
                    nc += 1;
                }
            }
        }
        assert!(within / nw as f64 > cross / nc as f64);
    }

    #[test]
    fn task_tags_are_uniform() {
        let (_, space) = world();
        let mut rng = stream(1, Stream::Tasks);
        let mut counts = [0usize; N_TAGS];
        for _ in 0..10_000 {
            let t = space.sample_task(&mut rng);
            assert!(t.tag < N_TAGS);
            assert!((norm(&t.query) - 1.0).abs() < 1e-6);
            counts[t.tag] += 1;
        }
        for c in counts {
            let f = c as f64 / 10_000.0;
            assert!((0.18..=0.22).contains(&f), "tag frequency {f}");
        }
    }

    #[test]
    fn best_contractor_usually_shares_the_task_tag() {
        let (config, space) = world();
        let pool = generate_workforce(&config, &space, &mut stream(5, Stream::Workforce)).unwrap();
        let mut rng = stream(5, Stream::Tasks);
        let mut hits = 0;
        for _ in 0..1000 {
            let t = space.sample_task(&mut rng);
            let best = crate::math::argmax_first(pool.iter().map(|c| dot(&t.query, &c.capability)))
                .unwrap();
            hits += usize::from(pool[best].tag == t.tag);
        }
        assert!(hits > 950, "{hits}");
    }

    #[test]
    fn workforce_regeneration_is_bit_identical() {
        let (config, space) = world();
        let a = generate_workforce(&config, &space, &mut stream(9, Stream::Workforce)).unwrap();
        let b = generate_workforce(&config, &space, &mut stream(9, Stream::Workforce)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn loaded_rows_are_normalised_and_checked() {
        let (mut config, _) = world();
        config.num_contractors = 5;
        let rows: Vec<LabeledEmbedding> = (0..5)
            .map(|t| {
                let mut v = vec![0.0; 384];
                v[t] = 3.0;
                v[10] = 1.0;
                LabeledEmbedding { tag: t, vector: v }
            })
            .collect();
        let space =
            EmbeddingSpace::from_labeled_rows(rows.clone(), 384, EmbeddingParams::default())
                .unwrap();
        let pool = generate_workforce(&config, &space, &mut stream(0, Stream::Workforce)).unwrap();
        for (c, r) in pool.iter().zip(&rows) {
            assert!((norm(&c.capability) - 1.0).abs() < 1e-6);
            assert_eq!(c.tag, r.tag);
        }
        let short = vec![LabeledEmbedding {
            tag: 0,
            vector: vec![1.0; 383],
        }];
        assert_eq!(
            EmbeddingSpace::from_labeled_rows(short, 384, EmbeddingParams::default()),
            Err(EmbeddingError::DimensionMismatch {
                expected: 384,
                actual: 383
            })
        );
        config.num_contractors = 4;
        assert!(matches!(
            generate_workforce(&config, &space, &mut stream(0, Stream::Workforce)),
            Err(EmbeddingError::RowCount { .. })
        ));
    }
}
