//! Counter-derived random streams.
//!
//! Every shot draws from its own ChaCha8 stream selected by `(seed, stream)`,
//! so results never depend on how work is split across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type ShotRng = ChaCha8Rng;

/// Streams at or above this offset are reserved for Clifford element draws.
pub(crate) const CLIFFORD_STREAM: u64 = 1 << 62;

pub fn stream_rng(seed: u64, stream: u64) -> ShotRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Child seed for a labelled sub-experiment.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    stream_rng(seed ^ 0x9e37_79b9_7f4a_7c15, label).next_u64()
}
