//! Sliding-window LinUCB: per-arm ridge models built from the last `W`
//! interactions only. Expired triples are removed from their arm.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::policy::{Allocator, Observation};

use super::linucb::LinUcb;

#[derive(Debug, Clone)]
pub struct SlidingWindowUcb {
    inner: LinUcb,
    window: Option<usize>,
    /// Arm of each interaction inside the window, oldest first.
    history: VecDeque<usize>,
    in_window: Vec<usize>,
}

impl SlidingWindowUcb {
    /// `window = None` never forgets and behaves exactly as LinUCB.
    pub fn new(num_arms: usize, alpha: f64, lambda: f64, window: Option<usize>) -> Self {
        Self {
            inner: LinUcb::new(num_arms, alpha, lambda),
            window,
            history: VecDeque::new(),
            in_window: vec![0; num_arms],
        }
    }

    pub fn window_len(&self) -> usize {
        self.history.len()
    }

    pub fn linucb(&self) -> &LinUcb {
        &self.inner
    }

    pub fn score(&self, k: usize, x: &[f64]) -> f64 {
        self.inner.score(k, x)
    }

    pub fn select_from<X: AsRef<[f64]>>(&self, contexts: &[X]) -> usize {
        self.inner.select_from(contexts)
    }

    pub fn update_arm(&mut self, k: usize, x: &[f64], reward: f64) {
        self.inner.update_arm(k, x, reward);
        if let Some(w) = self.window {
            self.history.push_back(k);
            self.in_window[k] += 1;
            while self.history.len() > w {
                let arm = self.history.pop_front().expect("non-empty window");
                self.forget(arm);
            }
        }
    }

    /// The window is FIFO, so the expiring triple is that arm's oldest.
    fn forget(&mut self, arm: usize) {
        self.in_window[arm] -= 1;
        let slot = self.inner.arm_slot(arm);
        if self.in_window[arm] == 0 {
            *slot = None;
        } else {
            slot.as_mut()
                .expect("arm with windowed data has a model")
                .remove_oldest();
        }
    }
}

impl Allocator for SlidingWindowUcb {
    fn name(&self) -> &'static str {
        "swucb"
    }

    fn select(&mut self, obs: &Observation<'_>) -> usize {
        self.inner.select(obs)
    }

    fn update(&mut self, obs: &Observation<'_>, selected: usize, reward: f64) {
        self.update_arm(selected, obs.contexts[selected].as_slice(), reward);
    }
}
