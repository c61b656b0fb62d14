//! Low-level arithmetic shared by the polynomial modules.

pub(crate) mod field;
pub(crate) mod mont;
pub(crate) mod ntt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

#[inline]
pub(crate) fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

pub(crate) fn powmod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, b, m);
        }
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases suffice below 2^64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Natural logarithm of a positive big integer (0 maps to -inf).
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(1.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `n mod m` in `[0, m)` for signed `n`.
pub(crate) fn rem_euclid_big(n: &BigInt, m: &BigUint) -> BigUint {
    let r = n.magnitude() % m;
    if n.sign() == Sign::Minus && !r.is_zero() {
        m - r
    } else {
        r
    }
}

pub(crate) fn limbs_of(x: &BigUint, width: usize, out: &mut [u64]) {
    let mut n = 0;
    for (slot, limb) in out.iter_mut().zip(x.iter_u64_digits()) {
        *slot = limb;
        n += 1;
    }
    debug_assert!(x.iter_u64_digits().len() <= width);
    for slot in out[n..width].iter_mut() {
        *slot = 0;
    }
}

/// Limb count needed for values below `m`.
pub(crate) fn width_for(m: &BigUint) -> usize {
    (m.bits().max(1)).div_ceil(64) as usize
}
