//! Seedable, platform-independent random stream.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Deterministic pseudo-random stream passed explicitly to every randomized
/// operation. The same seed yields the same sequence on every platform.
#[derive(Debug, Clone)]
pub struct RandomSource {
    inner: ChaCha20Rng,
}

impl RandomSource {
    pub fn from_seed(seed: u64) -> Self {
        RandomSource {
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, n)`. Panics if `n == 0`.
    pub fn below_u64(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        // Lemire-free rejection: keep it simple and exact.
        let zone = u64::MAX - (u64::MAX % n + 1) % n;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % n;
            }
        }
    }

    /// Uniform in `[0, n)`. Panics if `n` is zero.
    pub fn below(&mut self, n: &BigUint) -> BigUint {
        assert!(!n.is_zero(), "empty range");
        if n.bits() <= 64 {
            let digits = n.to_u64_digits();
            return BigUint::from(self.below_u64(digits[0]));
        }
        let bits = n.bits();
        let words = bits.div_ceil(64) as usize;
        let top_bits = bits - 64 * (words as u64 - 1);
        let top_mask = if top_bits == 64 { u64::MAX } else { (1u64 << top_bits) - 1 };
        let mut buf = vec![0u64; words];
        loop {
            for w in buf.iter_mut() {
                *w = self.next_u64();
            }
            buf[words - 1] &= top_mask;
            let x = from_u64_digits(&buf);
            if &x < n {
                return x;
            }
        }
    }

    /// Uniform in `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: &BigUint, hi: &BigUint) -> BigUint {
        assert!(lo <= hi, "empty range");
        let span = hi - lo + 1u32;
        lo + self.below(&span)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Splits off an independent sub-stream, deterministically.
    pub fn fork(&mut self) -> RandomSource {
        let mut seed = [0u8; 32];
        self.inner.fill_bytes(&mut seed);
        RandomSource {
            inner: ChaCha20Rng::from_seed(seed),
        }
    }
}

pub(crate) fn from_u64_digits(digits: &[u64]) -> BigUint {
    let mut v = Vec::with_capacity(digits.len() * 2);
    for d in digits {
        v.push(*d as u32);
        v.push((*d >> 32) as u32);
    }
    BigUint::new(v)
}
