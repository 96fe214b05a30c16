//! Non-hybrid allocation policies and the zero-fatigue oracle.

mod greedy;
mod linucb;
mod oracle;
mod swucb;
mod thompson;
mod topsis;

pub use greedy::{greedy_select, Greedy, GreedyMode};
pub use linucb::{ArmModel, LinUcb};
pub use oracle::{oracle_select, Oracle};
pub use swucb::SlidingWindowUcb;
pub use thompson::ThompsonSampling;
pub use topsis::{
    closeness_for, topsis_closeness, Criterion, Topsis, TopsisError, TOPSIS_CRITERIA,
    TOPSIS_WEIGHTS,
};
