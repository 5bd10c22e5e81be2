//! Seed derivation for independent, order-insensitive random streams.
//!
//! A master seed is mixed with integer tags (iteration index, ant index,
//! instance index, ...) through SplitMix64 rounds. Each distinct tag tuple
//! yields an independent ChaCha8 stream, so results do not depend on the
//! order in which streams are consumed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a master seed with a sequence of tags into a single derived seed.
pub(crate) fn derive(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for (i, &tag) in tags.iter().enumerate() {
        state = splitmix64(state ^ tag.wrapping_mul(GAMMA).wrapping_add(i as u64 + 1));
    }
    state
}

/// Independent RNG stream for the given tag tuple.
pub(crate) fn stream(master: u64, tags: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, tags))
}
