//! Bounded experience replay with uniform sampling.

use rand::Rng;

use crate::env::{Action, Observation};

/// One stored interaction.
#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub state: Observation,
    pub action: Action,
    pub reward: f64,
    pub next_state: Observation,
    pub terminal: bool,
}

/// Ring buffer of transitions: once full, new experience overwrites the
/// oldest.
pub struct ReplayBuffer {
    storage: Vec<Transition>,
    capacity: usize,
    write: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        Self {
            storage: Vec::with_capacity(capacity.min(1 << 20)),
            capacity,
            write: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.storage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.storage.is_empty()
    }

    pub fn push(&mut self, transition: Transition) {
        if self.storage.len() < self.capacity {
            self.storage.push(transition);
        } else {
            self.storage[self.write] = transition;
        }
        self.write = (self.write + 1) % self.capacity;
    }

    /// Uniformly samples `batch` transitions with replacement, or `None`
    /// while the buffer holds fewer than `batch` entries.
    pub fn sample<'a, R: Rng>(&'a self, batch: usize, rng: &mut R) -> Option<Vec<&'a Transition>> {
        if self.storage.len() < batch {
            return None;
        }
        Some(
            (0..batch)
                .map(|_| &self.storage[rng.random_range(0..self.storage.len())])
                .collect(),
        )
    }
}
