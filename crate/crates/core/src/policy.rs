//! What an allocator sees each episode, and the trait every policy implements.

use crate::embedding::EmbeddingSpace;
use crate::env::{ContextVector, Contractor, ContractorState, Task};

/// Per-episode view handed to allocators.
///
/// `contexts` is the observable (possibly noisy) input. `contractors` and
/// `states` expose static attributes and reputation for the heuristic
/// baselines; `contractors[k].capability` and `states[k].fatigue` are hidden
/// truth and are only read by the oracle.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub episode: usize,
    pub task: &'a Task,
    pub contexts: &'a [ContextVector],
    pub contractors: &'a [Contractor],
    pub states: &'a [ContractorState],
    pub space: &'a EmbeddingSpace,
    pub sigmoid_sharpness: f64,
    pub sigmoid_shift: f64,
}

impl Observation<'_> {
    /// Indices of contractors whose tag matches the task, or every index
    /// when none match.
    pub fn eligible(&self) -> alloc::vec::Vec<usize> {
        let on_tag: alloc::vec::Vec<usize> = (0..self.contractors.len())
            .filter(|&k| self.contractors[k].tag == self.task.tag)
            .collect();
        if on_tag.is_empty() {
            (0..self.contractors.len()).collect()
        } else {
            on_tag
        }
    }
}

pub trait Allocator {
    fn name(&self) -> &'static str;

    /// Chooses one contractor for this episode's task.
    fn select(&mut self, obs: &Observation<'_>) -> usize;

    /// Feedback for the contractor chosen by the preceding `select`.
    fn update(&mut self, obs: &Observation<'_>, selected: usize, reward: f64);
}
