//! Seeded random streams.
//!
//! Every randomized operation draws from ChaCha20 keyed by
//! `ChaCha20Rng::seed_from_u64(seed)`. Independent sub-streams of one seed
//! are obtained by selecting the ChaCha stream id, so parallel work can split
//! a seed without coordinating: stream `k` of seed `s` is
//! `stream(s, k)`. Sample draws use stream 0.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Stream ids reserved for the library's own consumers.
pub mod streams {
    pub const SAMPLES: u64 = 0;
    pub const SIGNAL_ATOMS: u64 = 1;
    pub const HARD_INSTANCE: u64 = 2;
    /// Noise tables use `NOISE_BASE + node index`.
    pub const NOISE_BASE: u64 = 1 << 32;
}

pub fn stream(seed: u64, id: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}
