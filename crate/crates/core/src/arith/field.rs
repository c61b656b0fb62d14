//! Prime fields used by the Vandermonde solvers.

use super::mont::Mont128;
use super::ntt::{convolve, Limbs, MixedRadix};
use super::{limbs_of, width_for};
use crate::metrics;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;

/// Arithmetic in `Z_q` for a prime `q`.
pub(crate) trait PrimeField {
    type E: Clone + PartialEq + Debug;

    fn modulus(&self) -> &BigUint;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn from_big(&self, x: &BigUint) -> Self::E;
    fn to_big(&self, x: &Self::E) -> BigUint;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// Product of two coefficient vectors (linear convolution).
    fn poly_mul(&self, a: &[Self::E], b: &[Self::E]) -> Vec<Self::E>;

    fn from_u64(&self, x: u64) -> Self::E {
        self.from_big(&BigUint::from(x))
    }

    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }

    fn pow(&self, a: &Self::E, e: &BigUint) -> Self::E {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn inv(&self, a: &Self::E) -> Option<Self::E> {
        if self.is_zero(a) {
            return None;
        }
        let e = self.modulus() - 2u32;
        Some(self.pow(a, &e))
    }

    fn schoolbook(&self, a: &[Self::E], b: &[Self::E]) -> Vec<Self::E> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        out
    }
}

const SCHOOLBOOK_CUTOFF: usize = 24;

/// Odd prime `q < 2^127`, elements kept in Montgomery form.
#[derive(Debug, Clone)]
pub(crate) struct Fp128 {
    mont: Mont128,
    q: BigUint,
}

impl Fp128 {
    pub fn new(q: &BigUint) -> Option<Self> {
        let n = q.to_u128()?;
        if n < 3 || n % 2 == 0 || n >= 1 << 127 {
            return None;
        }
        Some(Fp128 { mont: Mont128::new(n), q: q.clone() })
    }

    fn reduce_mixed(&self, mr: &MixedRadix) -> Vec<u128> {
        let m = &self.mont;
        let k = mr.k();
        let mut weights = Vec::with_capacity(k);
        let mut w = m.one();
        for &p in &mr.primes {
            weights.push(m.mul(w, m.r2()));
            w = m.mul(w, m.to_mont(p as u128));
        }
        let mut out = Vec::with_capacity(mr.len);
        for i in 0..mr.len {
            let mut acc = 0u128;
            for (d, wt) in mr.entry(i).iter().zip(&weights) {
                acc = m.add(acc, m.mul(*d as u128, *wt));
            }
            out.push(acc);
        }
        metrics::count((mr.len * k * 4) as u64);
        out
    }
}

impl PrimeField for Fp128 {
    type E = u128;

    fn modulus(&self) -> &BigUint {
        &self.q
    }
    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        self.mont.one()
    }
    fn from_big(&self, x: &BigUint) -> u128 {
        let r = (x % &self.q).to_u128().unwrap();
        self.mont.to_mont(r)
    }
    fn from_u64(&self, x: u64) -> u128 {
        self.mont.to_mont(x as u128)
    }
    fn to_big(&self, x: &u128) -> BigUint {
        BigUint::from(self.mont.from_mont(*x))
    }
    #[inline]
    fn add(&self, a: &u128, b: &u128) -> u128 {
        self.mont.add(*a, *b)
    }
    #[inline]
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        self.mont.sub(*a, *b)
    }
    #[inline]
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        metrics::count(4);
        self.mont.mul(*a, *b)
    }
    fn is_zero(&self, a: &u128) -> bool {
        *a == 0
    }
    fn pow(&self, a: &u128, e: &BigUint) -> u128 {
        let digits: Vec<u64> = e.iter_u64_digits().collect();
        metrics::count(8 * e.bits());
        self.mont.pow(*a, &digits)
    }

    fn poly_mul(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        if a.len().min(b.len()) <= SCHOOLBOOK_CUTOFF {
            return self.schoolbook(a, b);
        }
        let flat = |v: &[u128]| -> Vec<u64> {
            let mut out = Vec::with_capacity(2 * v.len());
            for x in v {
                let c = self.mont.from_mont(*x);
                out.push(c as u64);
                out.push((c >> 64) as u64);
            }
            out
        };
        let (fa, fb) = (flat(a), flat(b));
        let bits = self.q.bits();
        let mr = convolve(
            Limbs { data: &fa, width: 2, bits },
            Limbs { data: &fb, width: 2, bits },
            None,
        );
        self.reduce_mixed(&mr)
    }
}

/// Any prime, with plain big-integer residues.
#[derive(Debug, Clone)]
pub(crate) struct FpBig {
    q: BigUint,
}

impl FpBig {
    pub fn new(q: &BigUint) -> Self {
        FpBig { q: q.clone() }
    }
}

impl PrimeField for FpBig {
    type E = BigUint;

    fn modulus(&self) -> &BigUint {
        &self.q
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.q
    }
    fn from_big(&self, x: &BigUint) -> BigUint {
        x % &self.q
    }
    fn to_big(&self, x: &BigUint) -> BigUint {
        x.clone()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.q {
            s - &self.q
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.q - b
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let w = width_for(&self.q) as u64;
        metrics::count(w * w * 2);
        a * b % &self.q
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn pow(&self, a: &BigUint, e: &BigUint) -> BigUint {
        let w = width_for(&self.q) as u64;
        metrics::count(w * w * 2 * e.bits());
        a.modpow(e, &self.q)
    }

    fn poly_mul(&self, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
        if a.len().min(b.len()) <= SCHOOLBOOK_CUTOFF {
            return self.schoolbook(a, b);
        }
        let w = width_for(&self.q);
        let flat = |v: &[BigUint]| -> Vec<u64> {
            let mut out = vec![0u64; w * v.len()];
            for (x, chunk) in v.iter().zip(out.chunks_exact_mut(w)) {
                limbs_of(x, w, chunk);
            }
            out
        };
        let (fa, fb) = (flat(a), flat(b));
        let bits = self.q.bits();
        let mr = convolve(
            Limbs { data: &fa, width: w, bits },
            Limbs { data: &fb, width: w, bits },
            None,
        );
        let mut buf = Vec::new();
        (0..mr.len)
            .map(|i| {
                mr.exact(i, &mut buf);
                crate::rng::from_u64_digits(&buf) % &self.q
            })
            .collect()
    }
}
