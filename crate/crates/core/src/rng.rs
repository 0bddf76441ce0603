//! Reproducible Gaussian draws.
//!
//! Every draw index gets its own ChaCha stream, so a batch of draws gives the
//! same values no matter how it is split across threads.

use std::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A seeded family of independent streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent family for a sub-task (retries, distinct phases).
    pub fn derive(&self, tag: u64) -> Self {
        // splitmix64 finalizer
        let mut x = self.seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Self { seed: x ^ (x >> 31) }
    }

    /// Gaussian source for draw number `index`.
    pub fn gaussian(&self, index: u64) -> GaussianTap {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        GaussianTap { rng, spare: None }
    }
}

/// Standard normal variates by Box–Muller.
#[derive(Debug, Clone)]
pub struct GaussianTap {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianTap {
    /// Uniform on `(0, 1]` with 53 bits.
    fn uniform_open0(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open0();
        let u2 = self.uniform_open0();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for v in out {
            *v = self.next_gaussian();
        }
    }
}
