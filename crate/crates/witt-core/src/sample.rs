//! Deterministic seeded sampling.
//!
//! All randomness flows from `(seed, stream)` pairs: the seed is user-facing,
//! the stream id separates independent consumers so adding draws to one
//! suite never perturbs another. Backed by ChaCha8, which is stable across
//! platforms and releases.

use crate::field::{Elt, Field};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Stream ids used by the built-in suites; user-facing entry points take
/// explicit ids so reports are reproducible check by check. Constants are
/// spaced so a suite can fan out one sub-stream per configuration.
pub mod streams {
    pub const EXTENSION_SAMPLE: u64 = 100;
    pub const REGULARITY: u64 = 200;
    pub const HOCHSCHILD: u64 = 300;
    pub const BRACKET: u64 = 400;
    pub const CHARPOLY_POINTS: u64 = 500;
    pub const PREMET: u64 = 600;
    pub const ORBIT: u64 = 700;
    pub const CENTRALIZER: u64 = 800;
    pub const SPAN_CHECK: u64 = 900;
}

/// A deterministic draw source for one `(seed, stream)` pair.
pub struct Stream {
    rng: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Stream { rng }
    }

    /// Uniform integer in `[0, bound)` by rejection; bound must be nonzero.
    pub fn below(&mut self, bound: u32) -> u32 {
        debug_assert!(bound > 0);
        let zone = u32::MAX - (u32::MAX % bound);
        loop {
            let v = self.rng.next_u32();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform element of the field (each digit uniform in `[0, p)`).
    pub fn elt(&mut self, field: &Arc<Field>) -> Elt {
        let mut digits = [0u8; crate::field::MAX_EXT_DEGREE];
        for d in digits.iter_mut().take(field.extension_degree()) {
            *d = self.below(field.characteristic()) as u8;
        }
        Elt(digits)
    }

    /// Uniform nonzero element.
    pub fn nonzero_elt(&mut self, field: &Arc<Field>) -> Elt {
        loop {
            let e = self.elt(field);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// A coordinate vector of length `n`.
    pub fn point(&mut self, field: &Arc<Field>, n: usize) -> Vec<Elt> {
        (0..n).map(|_| self.elt(field)).collect()
    }
}

/// Deterministic pseudo-random field elements: same `(descriptor, seed)`
/// always yields the same sequence.
pub fn extension_sample(field: &Arc<Field>, seed: u64, count: usize) -> Vec<Elt> {
    let mut stream = Stream::new(seed, streams::EXTENSION_SAMPLE);
    (0..count).map(|_| stream.elt(field)).collect()
}
