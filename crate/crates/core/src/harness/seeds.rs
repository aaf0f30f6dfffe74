//! Derived random streams.
//!
//! A stream is identified by `(master, experiment, index)`; its seed is the
//! splitmix64 chain applied to the three words in turn, so any replicate can
//! be regenerated in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// One splitmix64 output for state `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, experiment: u64, index: u64) -> u64 {
    let a = splitmix64(master);
    let b = splitmix64(a ^ experiment);
    splitmix64(b ^ index.wrapping_mul(GOLDEN))
}

pub fn stream(master: u64, experiment: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, experiment, index))
}
