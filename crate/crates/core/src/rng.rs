//! Hierarchical RNG streams.
//!
//! Every random decision is drawn from a stream identified by
//! `(seed, phase, index)`, so the output of a parallel sampler does not depend
//! on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub const PHASE_WEIGHTS: u64 = 1;
pub const PHASE_POSITIONS: u64 = 2;
pub const PHASE_EDGES: u64 = 3;
pub const PHASE_NAIVE: u64 = 4;
pub const PHASE_JITTER: u64 = 5;
pub const PHASE_MONTE_CARLO: u64 = 6;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Derives a child seed from a parent seed and a label.
pub fn derive(seed: u64, label: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ label.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Independent stream for `(seed, phase, index)`.
pub fn stream(seed: u64, phase: u64, index: u64) -> StreamRng {
    StreamRng::seed_from_u64(derive(derive(seed, phase), index))
}

/// Runs `f` on a dedicated pool with `workers` threads, or on the global pool
/// when `workers == 0`.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
