use alloc::collections::VecDeque;

use crate::env::ContextVector;

/// Ring buffer of the most recent `(context, reward)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayBuffer {
    capacity: usize,
    items: VecDeque<(ContextVector, f64)>,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            items: VecDeque::with_capacity(capacity),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Appends, evicting the oldest entry when full.
    pub fn push(&mut self, context: ContextVector, reward: f64) {
        if self.capacity == 0 {
            return;
        }
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back((context, reward));
    }

    pub fn get(&self, i: usize) -> Option<&(ContextVector, f64)> {
        self.items.get(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(ContextVector, f64)> {
        self.items.iter()
    }
}
