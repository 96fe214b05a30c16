//! Fatigue-blind greedy heuristics restricted to the task's tag.

use crate::math::argmax_first;
use crate::policy::{Allocator, Observation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyMode {
    /// Highest reputation.
    MaxReputation,
    /// Lowest observed (surged) price.
    MinPrice,
}

/// Greedy pick among contractors sharing `task_tag`, over the whole pool if
/// none do. Ties go to the lowest index.
pub fn greedy_select(
    mode: GreedyMode,
    task_tag: usize,
    tags: &[usize],
    reputations: &[f64],
    prices: &[f64],
) -> usize {
    let any_on_tag = tags.contains(&task_tag);
    let eligible = |k: usize| !any_on_tag || tags[k] == task_tag;
    let scores = (0..tags.len()).map(|k| {
        if !eligible(k) {
            f64::NEG_INFINITY
        } else {
            match mode {
                GreedyMode::MaxReputation => reputations[k],
                GreedyMode::MinPrice => -prices[k],
            }
        }
    });
    argmax_first(scores).expect("non-empty pool")
}

#[derive(Debug, Clone)]
pub struct Greedy {
    mode: GreedyMode,
}

impl Greedy {
    pub fn new(mode: GreedyMode) -> Self {
        Self { mode }
    }
}

impl Allocator for Greedy {
    fn name(&self) -> &'static str {
        match self.mode {
            GreedyMode::MaxReputation => "greedy_max_rep",
            GreedyMode::MinPrice => "greedy_min_price",
        }
    }

    fn select(&mut self, obs: &Observation<'_>) -> usize {
        let tags: alloc::vec::Vec<usize> = obs.contractors.iter().map(|c| c.tag).collect();
        let reps: alloc::vec::Vec<f64> = obs.states.iter().map(|s| s.reputation).collect();
        let prices: alloc::vec::Vec<f64> = obs.contexts.iter().map(|x| x.price()).collect();
        greedy_select(self.mode, obs.task.tag, &tags, &reps, &prices)
    }

    fn update(&mut self, _obs: &Observation<'_>, _selected: usize, _reward: f64) {}
}
