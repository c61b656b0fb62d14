//! Exact integer convolution by multi-prime number-theoretic transforms.
//!
//! Inputs are nonnegative integers stored as fixed-width little-endian limb
//! vectors. The product coefficients are returned in mixed-radix form over
//! the transform primes; callers fold that into whatever ring they need.

use super::is_prime_u64;
use super::mont::Mont64;
use crate::metrics;
use std::sync::Mutex;

const TWO_ADICITY: u32 = 30;

#[derive(Debug, Clone, Copy)]
pub(crate) struct NttPrime {
    pub p: u64,
    pub m: Mont64,
    /// Montgomery form of an element of order exactly 2^30.
    root: u64,
    root_inv: u64,
}

static PRIMES: Mutex<Vec<NttPrime>> = Mutex::new(Vec::new());

/// The first `k` transform primes, all of the form `c * 2^30 + 1` in
/// `(2^61, 2^62)`, generated deterministically in decreasing order.
pub(crate) fn primes(k: usize) -> Vec<NttPrime> {
    let mut table = PRIMES.lock().unwrap_or_else(|e| e.into_inner());
    let mut c = match table.last() {
        Some(last) => (last.p - 1) >> TWO_ADICITY,
        None => 1u64 << 32,
    };
    while table.len() < k {
        c -= 1;
        assert!(c > 1 << 31, "transform prime table exhausted");
        let p = (c << TWO_ADICITY) + 1;
        if !is_prime_u64(p) {
            continue;
        }
        let m = Mont64::new(p);
        // A quadratic non-residue raised to the odd part has full 2-power order.
        let mut g = 3u64;
        let root = loop {
            let gm = m.to_mont(g);
            if m.from_mont(m.pow(gm, (p - 1) / 2)) == p - 1 {
                break m.pow(gm, c);
            }
            g += 1;
        };
        let root_inv = m.pow(root, (1u64 << TWO_ADICITY) - 1);
        table.push(NttPrime { p, m, root, root_inv });
    }
    table[..k].to_vec()
}

/// Number of transform primes whose product exceeds `2^bits`.
pub(crate) fn primes_for_bits(bits: u64) -> usize {
    (bits / 61 + 1) as usize
}

fn twiddles(m: &Mont64, root: u64, n: usize) -> Vec<u64> {
    let w = m.pow(root, (1u64 << TWO_ADICITY) / n as u64);
    let mut t = Vec::with_capacity(n / 2);
    let mut cur = m.one();
    for _ in 0..n / 2 {
        t.push(cur);
        cur = m.mul(cur, w);
    }
    t
}

fn forward(a: &mut [u64], m: &Mont64, tw: &[u64]) {
    let n = a.len();
    let mut half = n / 2;
    let mut stride = 1;
    while half >= 1 {
        for block in a.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for j in 0..half {
                let u = lo[j];
                let v = hi[j];
                lo[j] = m.add(u, v);
                hi[j] = m.mul(m.sub(u, v), tw[j * stride]);
            }
        }
        half /= 2;
        stride *= 2;
    }
    metrics::count((n as u64 / 2) * n.trailing_zeros() as u64);
}

fn inverse(a: &mut [u64], m: &Mont64, itw: &[u64]) {
    let n = a.len();
    let mut half = 1;
    let mut stride = n / 2;
    while half < n {
        for block in a.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for j in 0..half {
                let u = lo[j];
                let v = m.mul(hi[j], itw[j * stride]);
                lo[j] = m.add(u, v);
                hi[j] = m.sub(u, v);
            }
        }
        half *= 2;
        stride /= 2;
    }
    metrics::count((n as u64 / 2) * n.trailing_zeros() as u64);
}

/// A vector of nonnegative integers, each `width` limbs wide.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Limbs<'a> {
    pub data: &'a [u64],
    pub width: usize,
    /// Upper bound on the bit length of every entry.
    pub bits: u64,
}

impl Limbs<'_> {
    pub fn len(&self) -> usize {
        if self.width == 0 {
            0
        } else {
            self.data.len() / self.width
        }
    }
}

/// Product coefficients in mixed radix: entry `i` equals
/// `d[0] + d[1] P0 + d[2] P0 P1 + ...` with `d[j] < P_j`.
#[derive(Debug, Clone)]
pub(crate) struct MixedRadix {
    pub primes: Vec<u64>,
    pub len: usize,
    pub digits: Vec<u64>,
}

impl MixedRadix {
    pub fn k(&self) -> usize {
        self.primes.len()
    }

    pub fn entry(&self, i: usize) -> &[u64] {
        let k = self.k();
        &self.digits[i * k..(i + 1) * k]
    }

    /// Entry `i` as little-endian limbs of the exact integer.
    pub fn exact(&self, i: usize, out: &mut Vec<u64>) {
        out.clear();
        let d = self.entry(i);
        let k = d.len();
        out.push(d[k - 1]);
        for j in (0..k - 1).rev() {
            // out = out * P_j + d_j
            let mut carry = d[j] as u128;
            let pj = self.primes[j] as u128;
            for limb in out.iter_mut() {
                let t = *limb as u128 * pj + carry;
                *limb = t as u64;
                carry = t >> 64;
            }
            if carry > 0 {
                out.push(carry as u64);
            }
        }
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
        metrics::count((k * k) as u64 / 2 + 1);
    }
}

fn to_residues(x: Limbs<'_>, pr: &NttPrime, n: usize) -> Vec<u64> {
    let m = &pr.m;
    // R^(i+2) mod p, so that mul(limb_i, pw[i]) = limb_i * R^(i+1).
    let mut pw = Vec::with_capacity(x.width);
    let mut cur = m.to_mont(m.to_mont(1));
    for _ in 0..x.width {
        pw.push(cur);
        cur = m.to_mont(cur);
    }
    let mut out = vec![0u64; n];
    for (i, chunk) in x.data.chunks_exact(x.width).enumerate() {
        let mut acc = 0u64;
        for (limb, w) in chunk.iter().zip(&pw) {
            if *limb != 0 {
                acc = m.add(acc, m.mul(*limb, *w));
            }
        }
        out[i] = acc;
    }
    metrics::count((x.len() * x.width) as u64);
    out
}

/// Exact product of the polynomials with coefficient vectors `a` and `b`.
/// With `fold = Some(r)` the result is reduced modulo `x^r - 1` and has
/// length `r`; both inputs must then have length at most `r`.
pub(crate) fn convolve(a: Limbs<'_>, b: Limbs<'_>, fold: Option<usize>) -> MixedRadix {
    let (la, lb) = (a.len(), b.len());
    let k_terms = la.min(lb).max(1) as u64;
    let bits = a.bits + b.bits + (64 - (k_terms - 1).leading_zeros() as u64) + 1;
    let k = primes_for_bits(bits);
    let primes = primes(k);
    let out_len = match fold {
        Some(r) => r,
        None => (la + lb).saturating_sub(1),
    };
    if la == 0 || lb == 0 {
        return MixedRadix {
            primes: primes.iter().map(|p| p.p).collect(),
            len: out_len,
            digits: vec![0; out_len * k],
        };
    }
    let lin = la + lb - 1;
    let n = lin.next_power_of_two();
    let mut residues: Vec<Vec<u64>> = Vec::with_capacity(k);
    for pr in &primes {
        let m = &pr.m;
        let tw = twiddles(m, pr.root, n);
        let mut fa = to_residues(a, pr, n);
        let mut fb = to_residues(b, pr, n);
        forward(&mut fa, m, &tw);
        forward(&mut fb, m, &tw);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = m.mul(*x, *y);
        }
        drop(fb);
        let itw = twiddles(m, pr.root_inv, n);
        inverse(&mut fa, m, &itw);
        // Plain-domain scaling by 1/n.
        let n_inv = m.pow(m.to_mont(n as u64), pr.p - 2);
        let n_inv_plain = m.from_mont(n_inv);
        fa.truncate(lin);
        for x in fa.iter_mut() {
            *x = m.mul(*x, n_inv_plain);
        }
        if let Some(r) = fold {
            for i in r..lin {
                fa[i - r] = m.add(fa[i - r], fa[i]);
            }
            fa.truncate(r);
            fa.resize(r, 0);
        }
        metrics::count(n as u64 * 2 + lin as u64);
        residues.push(fa);
    }
    garner(&primes, &residues, out_len)
}

fn garner(primes: &[NttPrime], residues: &[Vec<u64>], len: usize) -> MixedRadix {
    let k = primes.len();
    // inv[j][i] = P_j^{-1} mod P_i in Montgomery form, j < i.
    let mut inv = vec![vec![0u64; k]; k];
    for i in 0..k {
        let m = &primes[i].m;
        for j in 0..i {
            let pj = m.to_mont(primes[j].p % primes[i].p);
            inv[j][i] = m.pow(pj, primes[i].p - 2);
        }
    }
    let mut digits = vec![0u64; len * k];
    for idx in 0..len {
        let d = &mut digits[idx * k..(idx + 1) * k];
        for i in 0..k {
            let pr = &primes[i];
            let m = &pr.m;
            let mut t = residues[i][idx];
            for j in 0..i {
                let mut v = d[j];
                if v >= pr.p {
                    v -= pr.p;
                }
                t = m.mul(m.sub(t, v), inv[j][i]);
            }
            d[i] = t;
        }
    }
    metrics::count((len * k * (k + 1) / 2) as u64);
    MixedRadix {
        primes: primes.iter().map(|p| p.p).collect(),
        len,
        digits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn schoolbook(a: &[u64], b: &[u64]) -> Vec<BigUint> {
        let mut out = vec![BigUint::default(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += BigUint::from(*x) * BigUint::from(*y);
            }
        }
        out
    }

    fn exact_big(mr: &MixedRadix, i: usize) -> BigUint {
        let mut v = Vec::new();
        mr.exact(i, &mut v);
        crate::rng::from_u64_digits(&v)
    }

    #[test]
    fn primes_are_ntt_friendly() {
        for pr in primes(4) {
            assert!(is_prime_u64(pr.p));
            assert_eq!((pr.p - 1) % (1 << 30), 0);
            assert!(pr.p > 1 << 61 && pr.p < 1 << 62);
            let m = pr.m;
            assert_eq!(m.from_mont(m.pow(pr.root, 1 << 30)), 1);
            assert_ne!(m.from_mont(m.pow(pr.root, 1 << 29)), 1);
        }
    }

    #[test]
    fn matches_schoolbook_one_limb() {
        let a: Vec<u64> = (0..37).map(|i| u64::MAX - i * 977).collect();
        let b: Vec<u64> = (0..23).map(|i| i * i * 1_000_003 + 5).collect();
        let mr = convolve(
            Limbs { data: &a, width: 1, bits: 64 },
            Limbs { data: &b, width: 1, bits: 64 },
            None,
        );
        let want = schoolbook(&a, &b);
        assert_eq!(mr.len, want.len());
        for (i, w) in want.iter().enumerate() {
            assert_eq!(&exact_big(&mr, i), w);
        }
    }

    #[test]
    fn two_limb_inputs_and_fold() {
        // Entries (lo, hi) pairs.
        let a: Vec<u64> = vec![1, 2, u64::MAX, 7, 0, 0, 3, 1];
        let b: Vec<u64> = vec![5, 0, 9, 9, 1, 1];
        let av: Vec<BigUint> = a.chunks(2).map(|c| crate::rng::from_u64_digits(c)).collect();
        let bv: Vec<BigUint> = b.chunks(2).map(|c| crate::rng::from_u64_digits(c)).collect();
        let r = 4;
        let mr = convolve(
            Limbs { data: &a, width: 2, bits: 128 },
            Limbs { data: &b, width: 2, bits: 128 },
            Some(r),
        );
        let mut want = vec![BigUint::default(); r];
        for (i, x) in av.iter().enumerate() {
            for (j, y) in bv.iter().enumerate() {
                want[(i + j) % r] += x * y;
            }
        }
        for (i, w) in want.iter().enumerate() {
            assert_eq!(&exact_big(&mr, i), w);
        }
    }
}
