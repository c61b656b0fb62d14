//! Montgomery multiplication for odd moduli below 2^63 and 2^127.

/// Modulus `n < 2^63`, odd. Elements in Montgomery form are `x * 2^64 mod n`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Mont64 {
    pub n: u64,
    neg_inv: u64,
    r2: u64,
}

impl Mont64 {
    pub fn new(n: u64) -> Self {
        assert!(n % 2 == 1 && n < (1 << 63));
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r as u128 * r as u128) % n as u128) as u64;
        Mont64 { n, neg_inv: inv.wrapping_neg(), r2 }
    }

    /// `a * b / 2^64 mod n`; requires `a * b < n * 2^64`.
    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.n as u128) >> 64) as u64;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    #[inline]
    pub fn to_mont(&self, x: u64) -> u64 {
        self.mul(x % self.n, self.r2)
    }

    #[inline]
    pub fn from_mont(&self, x: u64) -> u64 {
        self.mul(x, 1)
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

#[inline(always)]
pub(crate) fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64 as u128, a >> 64);
    let (b0, b1) = (b as u64 as u128, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 as u64 as u128) + (p10 as u64 as u128);
    let lo = (p00 as u64 as u128) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (lo, hi)
}

/// Modulus `n < 2^127`, odd. Montgomery radix `2^128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Mont128 {
    pub n: u128,
    neg_inv: u128,
    r1: u128,
    r2: u128,
}

impl Mont128 {
    pub fn new(n: u128) -> Self {
        assert!(n % 2 == 1 && n < (1 << 127) && n > 1);
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        // 2^128 mod n, then squared by doubling.
        let r1 = (u128::MAX % n + 1) % n;
        let mut r2 = r1;
        for _ in 0..128 {
            r2 <<= 1;
            if r2 >= n {
                r2 -= n;
            }
        }
        Mont128 { n, neg_inv: inv.wrapping_neg(), r1, r2 }
    }

    #[inline(always)]
    pub fn redc(&self, lo: u128, hi: u128) -> u128 {
        let m = lo.wrapping_mul(self.neg_inv);
        let (_, mh) = mul_wide(m, self.n);
        let carry = (lo != 0) as u128;
        let u = hi + mh + carry;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (lo, hi) = mul_wide(a, b);
        self.redc(lo, hi)
    }

    #[inline(always)]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    pub fn to_mont(&self, x: u128) -> u128 {
        self.mul(x % self.n, self.r2)
    }

    pub fn from_mont(&self, x: u128) -> u128 {
        self.redc(x, 0)
    }

    pub fn one(&self) -> u128 {
        self.r1
    }

    pub fn r2(&self) -> u128 {
        self.r2
    }

    pub fn pow(&self, base: u128, e: &[u64]) -> u128 {
        let mut acc = self.one();
        for limb in e.iter().rev() {
            for bit in (0..64).rev() {
                acc = self.mul(acc, acc);
                if (limb >> bit) & 1 == 1 {
                    acc = self.mul(acc, base);
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mont64_matches_u128() {
        let m = Mont64::new(4611686018427387847);
        let (a, b) = (123456789123456789u64, 987654321987654321u64);
        let want = (a as u128 * b as u128 % m.n as u128) as u64;
        let got = m.from_mont(m.mul(m.to_mont(a), m.to_mont(b)));
        assert_eq!(got, want);
    }

    #[test]
    fn mont128_matches_bigint() {
        use num_bigint::BigUint;
        let n: u128 = (1u128 << 126) + 39;
        let m = Mont128::new(n);
        let a = (1u128 << 125) + 12345;
        let b = (1u128 << 100) + 999;
        let want = BigUint::from(a) * BigUint::from(b) % BigUint::from(n);
        let got = m.from_mont(m.mul(m.to_mont(a), m.to_mont(b)));
        assert_eq!(BigUint::from(got), want);
        assert_eq!(m.from_mont(m.one()), 1);
    }

    #[test]
    fn mul_wide_max() {
        let (lo, hi) = mul_wide(u128::MAX, u128::MAX);
        assert_eq!(lo, 1);
        assert_eq!(hi, u128::MAX - 1);
    }
}
