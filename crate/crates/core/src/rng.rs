//! Seeded random streams.
//!
//! Every randomized routine takes an explicit master seed. Trial `i` draws
//! from its own ChaCha8 stream seeded with [`mix64`]`(master_seed, i)`, so a
//! result never depends on how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::RngCore;

/// Per-trial random stream.
pub type TrialRng = ChaCha8Rng;

/// SplitMix64 finalizer applied to `seed + (index + 1) * 0x9E3779B97F4A7C15`.
///
/// ```text
/// z = seed + (index + 1) * 0x9E3779B97F4A7C15   (wrapping)
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// z =  z ^ (z >> 31)
/// ```
#[inline]
pub fn mix64(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream for trial `index` under `master_seed`.
pub fn trial_rng(master_seed: u64, index: u64) -> TrialRng {
    TrialRng::seed_from_u64(mix64(master_seed, index))
}

/// Uniform draw in `[0, 1)` from the top 53 bits of one `next_u64`.
#[inline]
pub fn uniform<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
