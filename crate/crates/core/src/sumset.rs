//! Sumsets `A + B = {a + b}` in time softly linear in `#A + #B + #(A + B)`.
//!
//! Both sets become indicator polynomials modulo `x^p - 1` for a prime `p`
//! that separates all sums. Their product's support is the sumset; its size
//! is estimated by repeated hashing, after which the product is interpolated
//! twice, once from the plain indicators and once from copies whose
//! coefficients encode each element as `a l + 1`. Every sum then shows up
//! as a pair `(c, c (s l + 1)) mod l^2` from which `s` is decoded.

use crate::arith::rem_euclid_big;
use crate::config::Config;
use crate::error::{Error, FailKind, Result};
use crate::interp::basecase_multiply_with;
use crate::metrics;
use crate::numtheory::{centered, get_diff_prime, get_hash_prime, next_prime};
use crate::polycore::{dense_mul_cyclic_with, reduce_cyclic, ExponentSet, SparsePoly};
use crate::rng::RandomSource;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Redraws allowed when a hashing prime cannot be sampled.
const HASH_PRIME_ATTEMPTS: usize = 8;

/// A sumset problem with its size parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumsetInstance {
    pub a: ExponentSet,
    pub b: ExponentSet,
    /// Strict bound on every `|k|`, `k` in `A` or `B`.
    pub d: BigUint,
    /// `#A + #B`.
    pub r: u64,
}

impl SumsetInstance {
    pub fn new(a: ExponentSet, b: ExponentSet) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::invalid("sumset operands must be nonempty"));
        }
        let d = a
            .elems()
            .iter()
            .chain(b.elems())
            .map(|k| k.magnitude())
            .max()
            .unwrap()
            + 1u32;
        let r = (a.len() + b.len()) as u64;
        Ok(SumsetInstance { a, b, d, r })
    }

    /// Bounds any correct answer must satisfy.
    pub fn admits(&self, s: &ExponentSet) -> bool {
        let (na, nb) = (self.a.len() as u64, self.b.len() as u64);
        let n = s.len() as u64;
        if n + 1 < self.r || n > (na * nb).min(self.r * self.r) {
            return false;
        }
        let lo = self.a.min().unwrap() + self.b.min().unwrap();
        let hi = self.a.max().unwrap() + self.b.max().unwrap();
        s.min().is_some_and(|m| *m >= lo) && s.max().is_some_and(|m| *m <= hi)
    }
}

/// Upper estimate `S*` for the support size of `F1 G1 mod (x^p - 1)`, where
/// `r` is `#A + #B`. With probability at least `1 - mu`, `S*/4 < S <= S*`.
pub fn estimate_sparsity(f1: &SparsePoly, g1: &SparsePoly, p: &BigUint, r: u64, mu: f64, rng: &mut RandomSource) -> Result<u64> {
    estimate_sparsity_with(f1, g1, p, r, mu, &Config::default(), rng)
}

pub fn estimate_sparsity_with(
    f1: &SparsePoly,
    g1: &SparsePoly,
    p: &BigUint,
    r: u64,
    mu: f64,
    cfg: &Config,
    rng: &mut RandomSource,
) -> Result<u64> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::invalid("failure probability must be in (0,1)"));
    }
    let r = r.max(1);
    let m = BigUint::from(r) * r;
    let iterations = (8.0 * (8.0 / mu).ln()).max((r as f64).log2() + 1.0).ceil() as u64;
    let span = p << 1u32;
    let mut estimate = 2u64;
    for _ in 0..iterations {
        let q = hash_prime(2 * estimate, &span, cfg, rng)?;
        let q = q
            .to_usize()
            .ok_or_else(|| Error::invalid(format!("cyclic length {q} too large to materialize")))?;
        let a = reduce_cyclic(f1, q, &m)?;
        let b = reduce_cyclic(g1, q, &m)?;
        let h = dense_mul_cyclic_with(&a, &b, cfg.dense)?;
        metrics::count(q as u64);
        if h.nonzero_count() as u64 > estimate {
            estimate *= 2;
        }
    }
    Ok(estimate)
}

fn hash_prime(s: u64, d: &BigUint, cfg: &Config, rng: &mut RandomSource) -> Result<BigUint> {
    let mut last = Error::Fail(FailKind::PrimeSampling);
    for _ in 0..HASH_PRIME_ATTEMPTS {
        match get_hash_prime(s, d, 0.5, 0.25, cfg, rng) {
            Ok(q) => return Ok(q),
            Err(e @ Error::Fail(_)) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Indicator polynomial with each element weighted by `weight(k)`, exponents
/// reduced into `[0, p)`.
fn indicator(set: &ExponentSet, p: &BigUint, weight: impl Fn(&BigInt) -> BigInt) -> SparsePoly {
    let pi = BigInt::from(p.clone());
    SparsePoly::univariate(set.elems().iter().map(|k| (weight(k), k.mod_floor(&pi))))
}

/// Folds a product image into slots modulo `(m, x^p - 1)`.
fn fold(h: &SparsePoly, p: &BigUint, m: &BigUint) -> BTreeMap<BigUint, BigUint> {
    let mut slots: BTreeMap<BigUint, BigUint> = BTreeMap::new();
    for (c, e) in h.univariate_terms() {
        let slot = e.magnitude() % p;
        let v = slots.entry(slot).or_insert_with(BigUint::zero);
        *v = (&*v + rem_euclid_big(c, m)) % m;
    }
    slots.retain(|_, v| !v.is_zero());
    slots
}

/// Recovers the sum `s` in slot `j` from the pair `(c, c')`, `c' = c (s l + 1)`.
fn decode_slot(j: &BigUint, c: &BigUint, cp: &BigUint, l: &BigUint, p: &BigUint) -> Option<BigInt> {
    let m = l * l;
    let e = if !c.is_zero() && (cp % c).is_zero() && ((cp / c) % l).is_one() {
        (cp / c - 1u32) / l
    } else {
        let c_mod = c % l;
        let inv = crate::polycore::inverse_mod(&c_mod, l)?;
        let diff = if cp >= c { cp - c } else { cp + &m - c };
        if !(&diff % l).is_zero() {
            return None;
        }
        (diff / l) * inv % l
    };
    let s = centered(&BigInt::from(e), l);
    (rem_euclid_big(&s, p) == *j).then_some(s)
}

/// `A + B`; correct with probability at least `1 - mu`.
pub fn sumset(a: &ExponentSet, b: &ExponentSet, mu: f64, rng: &mut RandomSource) -> Result<ExponentSet> {
    sumset_with(a, b, mu, &Config::default(), rng)
}

pub fn sumset_with(a: &ExponentSet, b: &ExponentSet, mu: f64, cfg: &Config, rng: &mut RandomSource) -> Result<ExponentSet> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::invalid("failure probability must be in (0,1)"));
    }
    let inst = SumsetInstance::new(a.clone(), b.clone())?;
    let budget = mu / 4.0;
    let p = get_diff_prime(inst.r * inst.r, &(&inst.d << 2u32), 1.0, budget, rng)?;

    let one = |_: &BigInt| BigInt::one();
    let f1 = indicator(a, &p, one);
    let g1 = indicator(b, &p, one);
    let estimate = estimate_sparsity_with(&f1, &g1, &p, inst.r, budget, cfg, rng)?;

    let l = next_prime(&(&inst.d << 3u32));
    let li = BigInt::from(l.clone());
    let encoded = |k: &BigInt| k * &li + 1;
    let f2 = indicator(a, &p, encoded);
    let g2 = indicator(b, &p, encoded);

    let s = inst.r + 2 * estimate;
    let h1 = basecase_multiply_with(&f1, &g1, s, budget, cfg, rng)?;
    let h2 = basecase_multiply_with(&f2, &g2, s, budget, cfg, rng)?;

    let m = &l * &l;
    let plain = fold(&h1, &p, &m);
    let shifted = fold(&h2, &p, &m);
    if shifted.keys().any(|j| !plain.contains_key(j)) {
        return Err(Error::Fail(FailKind::ExponentDecode));
    }
    let zero = BigUint::zero();
    let mut out = Vec::with_capacity(plain.len());
    for (j, c) in &plain {
        let cp = shifted.get(j).unwrap_or(&zero);
        let s = decode_slot(j, c, cp, &l, &p).ok_or(Error::Fail(FailKind::ExponentDecode))?;
        out.push(s);
    }
    metrics::count(plain.len() as u64 * 8);
    let out = ExponentSet::new(out);
    if !inst.admits(&out) {
        return Err(Error::Fail(FailKind::ExponentDecode));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::naive_sumset;

    fn set(v: &[i64]) -> ExponentSet {
        ExponentSet::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn sumset_examples() {
        let mut rng = RandomSource::from_seed(1);
        assert_eq!(sumset(&set(&[0]), &set(&[0]), 0.1, &mut rng).unwrap(), set(&[0]));
        assert_eq!(sumset(&set(&[0, 1, 3]), &set(&[0, 2]), 0.1, &mut rng).unwrap(), set(&[0, 1, 2, 3, 5]));
        assert_eq!(sumset(&set(&[-2, 1]), &set(&[-1, 1]), 0.1, &mut rng).unwrap(), set(&[-3, -1, 0, 2]));
    }

    #[test]
    fn estimate_examples() {
        let mut rng = RandomSource::from_seed(2);
        let one = SparsePoly::univariate([(1, 0)]);
        assert_eq!(estimate_sparsity(&one, &one, &BigUint::from(23u32), 2, 0.1, &mut rng).unwrap(), 2);
        let p = BigUint::from(29u32);
        let f = indicator(&set(&[0, 1, 3]), &p, |_| BigInt::one());
        let g = indicator(&set(&[0, 2]), &p, |_| BigInt::one());
        let est = estimate_sparsity(&f, &g, &p, 5, 0.1, &mut rng).unwrap();
        assert!(est / 4 < 5 && 5 <= est, "{est}");
    }

    #[test]
    fn decode_handles_wrapped_and_negative_sums() {
        let l = BigUint::from(11u32);
        let p = BigUint::from(7u32);
        // s = -3, c = 4: c (s l + 1) = -128 = 114 mod 121
        let j = rem_euclid_big(&BigInt::from(-3), &p);
        assert_eq!(decode_slot(&j, &BigUint::from(4u32), &BigUint::from(114u32), &l, &p), Some(BigInt::from(-3)));
    }

    #[test]
    fn random_sumsets_against_oracle() {
        let mut rng = RandomSource::from_seed(5);
        let mut failures = 0;
        for trial in 0..40 {
            let draw = |n: usize, rng: &mut RandomSource| -> ExponentSet {
                (0..n).map(|_| BigInt::from(rng.below_u64(1 << 41) as i64 - (1 << 40))).collect()
            };
            let a = draw(1 + trial % 20, &mut rng);
            let b = draw(1 + trial % 13, &mut rng);
            match sumset(&a, &b, 0.1, &mut rng) {
                Ok(s) => assert_eq!(s, naive_sumset(&a, &b)),
                Err(e) if e.is_fail() => failures += 1,
                Err(e) => panic!("{e}"),
            }
        }
        assert!(failures <= 4, "{failures}");
    }
}
