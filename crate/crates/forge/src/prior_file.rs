//! Binary prior artifact, all little-endian:
//!
//! ```text
//! magic        8 bytes  "FORGEPR1"
//! config hash  u64      SimulationConfig::prior_fingerprint
//! world hash   u64      World::source_hash
//! seed         u64
//! d_q, d       u64, u64
//! n_params     u64
//! alpha        f64
//! weights      n_params × f64   (W_q, b_q, W_c, b_c, w_h, b_h; matrices row-major)
//! A0_inv       d × d × f64      row-major, already scaled by alpha
//! ```

use std::path::Path;

use forge_core::hybrid::PhysicsPrior;
use forge_core::linalg::Matrix;
use forge_core::neural::TwoTowerNet;
use forge_core::SimulationConfig;

use crate::error::ForgeError;

pub const MAGIC: &[u8; 8] = b"FORGEPR1";
const HEADER_LEN: usize = 8 + 8 * 7;

/// A decoded artifact before it is checked against a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorArtifact {
    pub prior: PhysicsPrior,
    pub world_hash: u64,
    pub seed: u64,
}

pub fn encode(prior: &PhysicsPrior, world_hash: u64, seed: u64) -> Vec<u8> {
    let params = prior.net.params();
    let d = prior.net.feature_dim();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * (params.len() + d * d));
    out.extend_from_slice(MAGIC);
    for v in [
        prior.fingerprint,
        world_hash,
        seed,
        prior.net.query_dim() as u64,
        d as u64,
        params.len() as u64,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&prior.alpha.to_le_bytes());
    for v in params.iter().chain(prior.a0_inv.as_slice()) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<PriorArtifact, ForgeError> {
    let bad = |reason: &str| ForgeError::PriorFormat {
        path: path.into(),
        reason: reason.into(),
    };
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err(bad("missing magic string"));
    }
    let word = |i: usize| {
        let at = 8 + 8 * i;
        u64::from_le_bytes(bytes[at..at + 8].try_into().expect("eight bytes"))
    };
    let (fingerprint, world_hash, seed) = (word(0), word(1), word(2));
    let (query_dim, feature_dim, n_params) = (word(3) as usize, word(4) as usize, word(5) as usize);
    let alpha = f64::from_bits(word(6));
    if n_params != TwoTowerNet::param_count(query_dim, feature_dim) {
        return Err(bad("weight count does not match the stored dimensions"));
    }
    let body = &bytes[HEADER_LEN..];
    if body.len() != 8 * (n_params + feature_dim * feature_dim) {
        return Err(bad("truncated or oversized payload"));
    }
    let mut floats = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("eight bytes")));
    let params: Vec<f64> = floats.by_ref().take(n_params).collect();
    let a0: Vec<f64> = floats.collect();
    let net = TwoTowerNet::from_params(query_dim, feature_dim, params)
        .map_err(|_| bad("inconsistent weights"))?;
    let a0_inv =
        Matrix::from_vec(feature_dim, feature_dim, a0).map_err(|_| bad("inconsistent A0_inv"))?;
    Ok(PriorArtifact {
        prior: PhysicsPrior {
            net,
            a0_inv,
            alpha,
            fingerprint,
        },
        world_hash,
        seed,
    })
}

pub fn save(
    path: &Path,
    prior: &PhysicsPrior,
    world_hash: u64,
    seed: u64,
) -> Result<(), ForgeError> {
    std::fs::write(path, encode(prior, world_hash, seed)).map_err(|e| ForgeError::io(path, e))
}

/// Reads an artifact and rejects it unless it was built for `config` and
/// the same embedding world.
pub fn load(
    path: &Path,
    config: &SimulationConfig,
    world_hash: u64,
) -> Result<PhysicsPrior, ForgeError> {
    let bytes = std::fs::read(path).map_err(|e| ForgeError::io(path, e))?;
    let artifact = decode(&bytes, path)?;
    let expected = config.prior_fingerprint();
    if artifact.prior.fingerprint != expected {
        return Err(ForgeError::PriorHash {
            path: path.into(),
            expected,
            found: artifact.prior.fingerprint,
        });
    }
    if artifact.world_hash != world_hash {
        return Err(ForgeError::PriorWorld {
            path: path.into(),
            expected: world_hash,
            found: artifact.world_hash,
        });
    }
    Ok(artifact.prior)
}
