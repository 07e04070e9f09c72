//! Keyed random streams.
//!
//! Every random decision in the crate draws from a [`Stream`], a ChaCha8
//! generator whose seed is derived from a tuple of integers (a master seed
//! followed by indices such as the π-index and trial index). ChaCha is a
//! counter-based cipher, so the n-th draw of a stream is a pure function of
//! its key and n: results do not depend on scheduling or on how many other
//! streams exist.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a key tuple into a single 64-bit stream identifier.
pub fn derive_key(parts: &[u64]) -> u64 {
    let mut h = 0x9e37_79b9_7f4a_7c15_u64 ^ (parts.len() as u64);
    for &p in parts {
        h = mix64(h.wrapping_add(0x9e37_79b9_7f4a_7c15) ^ mix64(p));
    }
    h
}

/// A reproducible random stream identified by a 64-bit key.
#[derive(Clone, Debug)]
pub struct Stream {
    key: u64,
    rng: ChaCha8Rng,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self::from_key(derive_key(&[seed]))
    }

    /// Stream keyed by an arbitrary tuple, e.g. `(master_seed, pi_index, trial)`.
    pub fn keyed(parts: &[u64]) -> Self {
        Self::from_key(derive_key(parts))
    }

    fn from_key(key: u64) -> Self {
        let mut seed = [0u8; 32];
        for (i, chunk) in seed.chunks_mut(8).enumerate() {
            chunk.copy_from_slice(&mix64(key.wrapping_add(i as u64)).to_le_bytes());
        }
        Stream { key, rng: ChaCha8Rng::from_seed(seed) }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    /// An independent child stream; does not advance `self`.
    pub fn split(&self, tag: u64) -> Stream {
        Stream::keyed(&[self.key, tag])
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in `[0, bound)`.
    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    /// One Bernoulli trial with success probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        p >= 1.0 || self.uniform() < p
    }
}

impl RngCore for Stream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
