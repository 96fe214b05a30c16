//! Restless crowdsourcing marketplace with strategic contractors, plus the
//! allocation policies that run against it.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! experiment export live in the companion `forge` crate.
//!
//! Module map:
//!
//! - [`env`]: contractor pool, fatigue / price / reputation dynamics,
//!   availability declarations, stress injection and context construction.
//! - [`embedding`]: synthetic skill-cluster embedding space and the
//!   similarity to success-probability mapping.
//! - [`baselines`]: greedy, TOPSIS, LinUCB, sliding-window UCB, linear
//!   Thompson sampling and the zero-fatigue oracle.
//! - [`neural`]: the two-tower network, its analytic gradients and training.
//! - [`hybrid`]: neural-linear UCB with TOPSIS fusion and the offline
//!   covariance prior.
//! - [`experiment`]: episode loop, metrics and the stress grids.
#![no_std]
// `!(x > 0.0)` also rejects NaN; index loops mirror the matrix algebra.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod baselines;
pub mod config;
pub mod embedding;
pub mod env;
pub mod experiment;
pub mod hybrid;
pub mod linalg;
pub mod math;
pub mod neural;
pub mod policy;
pub mod rng;

pub use config::{ConfigError, SimulationConfig, StressConfig};
pub use embedding::EmbeddingSpace;
pub use env::{ContextVector, Contractor, ContractorState, Marketplace, Task};
pub use experiment::{EpisodeLog, MetricsReport, PolicyKind};
pub use policy::{Allocator, Observation};
