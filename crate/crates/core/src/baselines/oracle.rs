use crate::embedding::{base_success_prob, cosine_similarity};
use crate::env::{Contractor, Task};
use crate::math::argmax_first;
use crate::policy::{Allocator, Observation};

/// Contractor with the highest zero-fatigue success probability for `task`,
/// using hidden capabilities and ignoring tags, price and availability.
pub fn oracle_select(task: &Task, contractors: &[Contractor], sharpness: f64, shift: f64) -> usize {
    argmax_first(contractors.iter().map(|c| {
        let s = cosine_similarity(&task.query, &c.capability).unwrap_or(-1.0);
        base_success_prob(s, sharpness, shift)
    }))
    .expect("non-empty pool")
}

#[derive(Debug, Clone, Default)]
pub struct Oracle;

impl Allocator for Oracle {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn select(&mut self, obs: &Observation<'_>) -> usize {
        oracle_select(
            obs.task,
            obs.contractors,
            obs.sigmoid_sharpness,
            obs.sigmoid_shift,
        )
    }

    fn update(&mut self, _obs: &Observation<'_>, _selected: usize, _reward: f64) {}
}
