//! Split-stream random number generation.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by a
//! 64-bit seed and selected by a 64-bit stream index, so a Monte Carlo sample
//! `s` always sees the same numbers no matter which worker evaluates it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream reserved for topology generators.
pub(crate) const TOPOLOGY_STREAM: u64 = u64::MAX;
/// Stream reserved for random initial phases.
pub(crate) const PHASE_STREAM: u64 = u64::MAX - 1;

/// Generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Precomputed key for a seed; cheaper than `stream_rng` when many streams
/// of the same seed are opened.
#[derive(Debug, Clone, Copy)]
pub struct StreamKey([u8; 32]);

impl StreamKey {
    pub fn new(seed: u64) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(seed);
        StreamKey(rng.get_seed())
    }

    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.0);
        rng.set_stream(stream);
        rng
    }
}
