//! Deterministic per-task RNG streams.
//!
//! Every randomized task (a bootstrap replicate, an experiment trial) gets its
//! own generator keyed by (seed, domain, a, b). Work can then be scheduled on
//! any number of threads without changing a single drawn value, which is what
//! makes experiment and bootstrap output bit-identical across thread counts.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const DOMAIN_EXPERIMENT: u64 = 0;
pub(crate) const DOMAIN_BOOTSTRAP: u64 = 1;

pub(crate) fn substream_rng(seed: u64, domain: u64, a: u64, b: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&domain.to_le_bytes());
    key[16..24].copy_from_slice(&a.to_le_bytes());
    key[24..32].copy_from_slice(&b.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
