//! Deterministic, splittable random streams.
//!
//! A [`RngStream`] is identified by `(master_seed, stream_index)`. The same
//! pair produces the same output sequence on every platform and in every
//! run, and distinct stream indices give streams that can be treated as
//! independent. Parallel consumers must each own their own stream; a stream
//! is never shared across threads.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

/// SplitMix64 finalizer (Vigna); a +1/-1 avalanche mixer over 64 bits.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The frozen child-key schedule: a ChaCha12 key derived from the seed pair
/// by a SplitMix64 walk. Changing this breaks every recorded result, so it
/// is pinned by golden tests.
fn derive_key(master_seed: u64, stream_index: u64) -> [u8; 32] {
    let mut state = mix64(master_seed ^ GOLDEN_GAMMA) ^ mix64(stream_index.wrapping_mul(GOLDEN_GAMMA) ^ 0xD1B5_4A32_D192_ED03);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(GOLDEN_GAMMA);
        chunk.copy_from_slice(&mix64(state).to_le_bytes());
    }
    key
}

/// Deterministic 64-bit seed derivation for sub-experiments (e.g. one seed
/// per grid point). Same mixing family as the stream keys but a distinct
/// tweak, so derived masters do not collide with stream indices.
pub fn derive_seed(master_seed: u64, salt: u64) -> u64 {
    mix64(master_seed ^ mix64(salt ^ 0xA0761D6478BD642F).wrapping_add(GOLDEN_GAMMA))
}

/// A single deterministic pseudo-random stream (ChaCha12 core).
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha12Rng,
    master_seed: u64,
    stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            rng: ChaCha12Rng::from_seed(derive_key(master_seed, stream_index)),
            master_seed,
            stream_index,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw from `0..bound`, unbiased (widening-multiply rejection).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        loop {
            let x = self.next_u64();
            let m = (x as u128) * (bound as u128);
            let low = m as u64;
            if low >= bound || low >= bound.wrapping_neg() % bound {
                return (m >> 64) as u64;
            }
        }
    }

    /// Uniform draw from `[0, 1)` with 53 bits of precision.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn distinct_indices_diverge() {
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 1);
        let same = (0..16).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    // Golden values pin the key-derivation schedule; a failure here means
    // recorded seeds no longer reproduce published results.
    #[test]
    fn frozen_key_schedule() {
        let firsts: Vec<u64> = [(0u64, 0u64), (1, 0), (0, 1), (42, 7)]
            .iter()
            .map(|&(s, i)| RngStream::new(s, i).next_u64())
            .collect();
        assert_eq!(
            firsts,
            vec![
                6402827419928049964,
                18069036671482818574,
                17995490796073131264,
                11689819692621792075,
            ]
        );
    }

    #[test]
    fn below_is_in_range_and_hits_all_residues() {
        let mut rng = RngStream::new(1, 0);
        let mut seen = [false; 7];
        for _ in 0..1000 {
            let v = rng.below(7);
            assert!(v < 7);
            seen[v as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn unit_f64_in_range() {
        let mut rng = RngStream::new(9, 9);
        for _ in 0..1000 {
            let u = rng.unit_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
