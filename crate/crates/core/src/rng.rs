//! Seeded randomness used for generic choices (random combinations, samples).

use crate::scalars::C64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Deterministic generator; every randomized routine takes one of these.
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-1, 1)`.
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.unit() - 1.0
    }

    pub fn complex(&mut self) -> C64 {
        C64::new(self.symmetric(), self.symmetric())
    }

    pub fn complex_vec(&mut self, n: usize) -> alloc::vec::Vec<C64> {
        (0..n).map(|_| self.complex()).collect()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }
}
