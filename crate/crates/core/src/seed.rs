//! Seed derivation. Every random choice in the crate flows from a `u64`
//! seed through ChaCha8, so runs are reproducible across platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// splitmix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent sub-seed for `(tag, index)` under `base`.
pub fn derive(base: u64, tag: u64, index: u64) -> u64 {
    mix(mix(base ^ mix(tag)) ^ index)
}
