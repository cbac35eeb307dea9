//! Deterministic seed derivation.
//!
//! Every random stream in the toolkit is derived from a single base seed by
//! hashing a path of integer labels, so that one command-level seed fixes a
//! whole run regardless of thread count or scheduling. The mixer is the
//! SplitMix64 finaliser applied once per path element.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream labels used throughout the crate.
pub mod stream {
    pub const SAMPLE: u64 = 0x5341_4d50;
    pub const SA_READ: u64 = 0x5341_5244;
    pub const SA_START: u64 = 0x5354_5254;
    pub const SA_ORDER: u64 = 0x4f52_4452;
    pub const SA_ACCEPT: u64 = 0x4143_4350;
    pub const SA_PROBE: u64 = 0x5052_4f42;
    pub const GREEDY: u64 = 0x4752_4459;
    pub const POST: u64 = 0x504f_5354;
    pub const BRANCH: u64 = 0x4252_4e43;
    pub const EXACT: u64 = 0x4558_4354;
    pub const GENERATE: u64 = 0x4745_4e52;
    pub const BENCH: u64 = 0x4245_4e43;
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `base` and a path of labels.
pub fn derive(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}

/// A ChaCha8 generator seeded from `derive(base, path)`.
pub fn rng(base: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(base, path))
}
