//! Neural-linear UCB over the two-tower Hadamard features, fused with a
//! decaying TOPSIS term, optionally warm-started from an offline prior.

mod allocator;
mod fusion;
mod gram;
mod prior;

pub use allocator::{HybridAllocator, HybridError, SelectionTrace};
pub use fusion::{fused_score_and_select, FusionState};
pub use gram::GramState;
pub use prior::{build_physics_prior, pretrain_prior, prior_gram, PhysicsPrior, PriorError};
