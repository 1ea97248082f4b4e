//! Seeded randomness shared by all solvers.
//!
//! A run owns one [`SampleStream`] built from a 64-bit seed. Minibatch indices
//! come from ChaCha stream 0; the averaged-iterate selection uses stream 1 so
//! that it never perturbs the sample sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SELECTION_STREAM: u64 = 1;

#[derive(Debug, Clone)]
pub struct SampleStream {
    rng: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// `size` indices drawn uniformly with replacement from `0..n`.
    pub fn draw_batch(&mut self, n: usize, size: usize) -> Vec<usize> {
        (0..size).map(|_| self.rng.random_range(0..n)).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Uniform draw from `1..=t_max`, independent of the sample stream.
pub fn select_iterate(seed: u64, t_max: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SELECTION_STREAM);
    rng.random_range(1..=t_max.max(1))
}
