//! Seeded randomness shared by every sampling routine.
//!
//! The contract is fixed so that graphs, percolations and samples can be
//! reproduced in any language:
//!
//! * a 64-bit seed is expanded into xoshiro256++ state with splitmix64
//!   (the reference `seed_from_u64` procedure);
//! * independent purposes draw from disjoint substreams: stream `s` is the
//!   seeded generator advanced by `s` calls to `jump()` (2^128 steps each);
//! * bounded integers use Lemire's multiply-and-reject method on `next_u64`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};

pub use rand_xoshiro::Xoshiro256PlusPlus as Rng;

/// Purpose-specific substreams of a seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Generation = 0,
    Percolation = 1,
    Sampling = 2,
}

/// One splitmix64 output for state `x`.
pub fn splitmix64(x: u64) -> u64 {
    SplitMix64::seed_from_u64(x).next_u64()
}

/// Seed of the `index`-th trial (or sample) under `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(base ^ index)
}

pub fn stream(seed: u64, which: Stream) -> Rng {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for _ in 0..which as u8 {
        rng.jump();
    }
    rng
}

/// Uniform integer in `0..bound`. `bound` must be positive.
pub fn uniform_below<R: RngCore>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0, "uniform_below needs a positive bound");
    let threshold = bound.wrapping_neg() % bound;
    loop {
        let m = u128::from(rng.next_u64()) * u128::from(bound);
        if (m as u64) >= threshold {
            return (m >> 64) as u64;
        }
    }
}

/// Uniform float in `[0, 1)` built from the top 53 bits.
pub fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// In-place Fisher–Yates shuffle, last index first.
pub fn shuffle<R: RngCore, T>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = uniform_below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// Integer size in `[lo, hi]` drawn log-uniformly.
pub fn log_uniform_size<R: RngCore>(rng: &mut R, lo: usize, hi: usize) -> usize {
    debug_assert!(1 <= lo && lo <= hi);
    let (a, b) = ((lo as f64).ln(), ((hi + 1) as f64).ln());
    let x = (a + unit_f64(rng) * (b - a)).exp().floor() as usize;
    x.clamp(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_vector() {
        // First output of splitmix64 from state 0 (Vigna's reference code).
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
    }

    #[test]
    fn xoshiro_seeding_is_splitmix_expansion() {
        let mut sm = SplitMix64::seed_from_u64(42);
        let mut bytes = [0u8; 32];
        for chunk in bytes.chunks_mut(8) {
            chunk.copy_from_slice(&sm.next_u64().to_le_bytes());
        }
        let mut a = Xoshiro256PlusPlus::from_seed(bytes);
        let mut b = stream(42, Stream::Generation);
        for _ in 0..8 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn streams_differ() {
        let a = stream(9, Stream::Generation).next_u64();
        let b = stream(9, Stream::Percolation).next_u64();
        let c = stream(9, Stream::Sampling).next_u64();
        assert!(a != b && b != c && a != c);
    }

    #[test]
    fn bounded_draws_stay_in_range() {
        let mut rng = stream(1, Stream::Sampling);
        let mut seen = [0usize; 7];
        for _ in 0..7000 {
            seen[uniform_below(&mut rng, 7) as usize] += 1;
        }
        assert!(seen.iter().all(|&c| c > 800 && c < 1200), "{seen:?}");
    }

    #[test]
    fn log_uniform_in_bounds() {
        let mut rng = stream(3, Stream::Sampling);
        for _ in 0..1000 {
            let s = log_uniform_size(&mut rng, 1, 50);
            assert!((1..=50).contains(&s));
        }
        assert_eq!(log_uniform_size(&mut rng, 5, 5), 5);
    }
}
