//! Seed derivation and named random streams.
//!
//! Every source of randomness in a run draws from its own ChaCha stream
//! derived from `(seed, stream)`. Turning noise or turnover on therefore
//! never perturbs the task sequence or the outcome draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    /// Cluster centres of the embedding space.
    World = 1,
    /// Initial contractor pool.
    Workforce = 2,
    Tasks = 3,
    Outcomes = 4,
    Noise = 5,
    Turnover = 6,
    /// Policy-internal randomness (Thompson draws, replay sampling).
    Policy = 7,
    /// Offline dataset for the covariance prior.
    Offline = 8,
    /// Network weight initialisation.
    Init = 9,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic mix of a base seed with any number of coordinates.
pub fn mix_seed(base: u64, parts: &[u64]) -> u64 {
    let mut h = splitmix64(base);
    for p in parts {
        h = splitmix64(h ^ splitmix64(*p));
    }
    h
}

pub fn stream(seed: u64, which: Stream) -> SimRng {
    SimRng::seed_from_u64(mix_seed(seed, &[which as u64]))
}

#[inline]
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}
