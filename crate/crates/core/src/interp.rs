//! Base-case sparse multiplication from cyclic images of the product.
//!
//! The product `H = FG` is never expanded. Instead, images
//! `H mod (m, z^r - 1)` are formed from the reduced inputs by dense
//! arithmetic, and `H` is recovered term by term. Exponents are read off
//! with the encoding `c x^e -> c (e l + 1) x^e` modulo `l^2`: an
//! uncollided term shows up as the slot pair `(c, c (e l + 1))`, and
//! `e = ((c' - c) / l) c^-1 mod l`.
//!
//! Recovery peels: each round draws two cyclic lengths, decodes every slot
//! of the residual `H - H*` in both, and accepts a term only when both
//! lengths decode it identically. The result is checked at random points
//! before it is returned.

use crate::arith::field::PrimeField;
use crate::arith::rem_euclid_big;
use crate::config::{Config, DenseStrategy};
use crate::error::{Error, FailKind, Result};
use crate::metrics;
use crate::numtheory::{centered, get_hash_prime, get_prime_big, next_prime};
use crate::polycore::{dense_mul_cyclic_with, scale_arg_reduce, DenseCyclicPoly, SparsePoly};
use crate::rng::RandomSource;
use crate::vander::with_field;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};

/// Largest cyclic length materialized as a dense array.
const MAX_CYCLIC_LEN: u64 = 1 << 31;

/// Which cyclic image of a product to compute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductImageQuery {
    pub r: usize,
    /// Multiply the exponent-encoded inputs; the modulus must then be `l^2`.
    pub scaled: bool,
    pub modulus: BigUint,
}

impl ProductImageQuery {
    pub fn new(r: usize, scaled: bool, modulus: BigUint) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("cyclic length must be positive"));
        }
        if modulus < BigUint::from(2u32) {
            return Err(Error::invalid("modulus must be at least 2"));
        }
        if scaled {
            let l = modulus.sqrt();
            if &l * &l != modulus {
                return Err(Error::invalid("encoded images need a square modulus"));
            }
        }
        Ok(ProductImageQuery { r, scaled, modulus })
    }

    /// `H(alpha z) mod (m, z^r - 1)` for `H = FG`, with the exponent encoding
    /// applied to both factors when `scaled`.
    pub fn evaluate(&self, f: &SparsePoly, g: &SparsePoly, alpha: &BigUint, strategy: DenseStrategy) -> Result<DenseCyclicPoly> {
        if !self.scaled {
            let a = scale_arg_reduce(f, alpha, self.r, &self.modulus)?;
            let b = scale_arg_reduce(g, alpha, self.r, &self.modulus)?;
            return dense_mul_cyclic_with(&a, &b, strategy);
        }
        let l = self.modulus.sqrt();
        let a = scale_arg_reduce(&encode(f, &l)?, alpha, self.r, &self.modulus)?;
        let b = scale_arg_reduce(&encode(g, &l)?, alpha, self.r, &self.modulus)?;
        dense_mul_cyclic_with(&a, &b, strategy)
    }
}

/// `F(alpha z) G(alpha z) mod (q, z^r - 1)`, computed from the reduced factors.
pub fn product_image(f: &SparsePoly, g: &SparsePoly, alpha: &BigUint, r: usize, q: &BigUint) -> Result<DenseCyclicPoly> {
    ProductImageQuery::new(r, false, q.clone())?.evaluate(f, g, alpha, DenseStrategy::Dense)
}

/// Replaces each term `c x^e` by `c (e l + 1) x^e`.
fn encode(f: &SparsePoly, l: &BigUint) -> Result<SparsePoly> {
    if f.nvars() != 1 {
        return Err(Error::invalid("univariate polynomial required"));
    }
    let li = BigInt::from(l.clone());
    Ok(SparsePoly::univariate(f.univariate_terms().map(|(c, e)| (c * (e * &li + 1), e.clone()))))
}

/// The plain and exponent-encoded images of `FG` modulo `(l^2, z^r - 1)`.
pub fn encoded_product_image(f: &SparsePoly, g: &SparsePoly, l: &BigUint, r: usize) -> Result<(DenseCyclicPoly, DenseCyclicPoly)> {
    encoded_images(f, g, l, r, DenseStrategy::Dense)
}

fn encoded_images(f: &SparsePoly, g: &SparsePoly, l: &BigUint, r: usize, strategy: DenseStrategy) -> Result<(DenseCyclicPoly, DenseCyclicPoly)> {
    let m = l * l;
    let one = BigUint::one();
    let plain = ProductImageQuery::new(r, false, m.clone())?.evaluate(f, g, &one, strategy)?;
    let shifted = ProductImageQuery::new(r, true, m)?.evaluate(f, g, &one, strategy)?;
    Ok((plain, shifted))
}

struct Decoder<'a> {
    l: &'a BigUint,
    m: &'a BigUint,
    degree_bound: &'a BigUint,
    height_bound: &'a BigUint,
}

struct Pending {
    slot: usize,
    t: BigUint,
    c: BigInt,
    c_mod_l: BigUint,
}

impl Decoder<'_> {
    /// The term `(e, c)` a residual slot pair decodes to, if it is consistent.
    #[cfg(test)]
    fn decode(&self, slot: usize, r: usize, plain: &BigUint, shifted: &BigUint) -> Option<(BigUint, BigInt)> {
        let p = self.screen(slot, plain, shifted)?;
        self.finish(r, vec![p]).pop()
    }

    /// Checks that need no inverse.
    fn screen(&self, slot: usize, plain: &BigUint, shifted: &BigUint) -> Option<Pending> {
        if plain.is_zero() {
            return None;
        }
        let c = centered(&BigInt::from(plain.clone()), self.m);
        if c.magnitude() > self.height_bound {
            return None;
        }
        let c_mod_l = rem_euclid_big(&c, self.l);
        if c_mod_l.is_zero() {
            return None;
        }
        let diff = if shifted >= plain { shifted - plain } else { shifted + self.m - plain };
        if !(&diff % self.l).is_zero() {
            return None;
        }
        Some(Pending { slot, t: diff / self.l, c, c_mod_l })
    }

    /// Recovers exponents for all screened slots with a single inversion.
    fn finish(&self, r: usize, pending: Vec<Pending>) -> Vec<(BigUint, BigInt)> {
        let l = self.l;
        let mut prefix = Vec::with_capacity(pending.len());
        let mut acc = BigUint::one();
        for p in &pending {
            prefix.push(acc.clone());
            acc = acc * &p.c_mod_l % l;
        }
        let Some(mut inv) = crate::polycore::inverse_mod(&acc, l) else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(pending.len());
        for (p, before) in pending.into_iter().zip(prefix).rev() {
            let c_inv = &inv * &before % l;
            inv = inv * &p.c_mod_l % l;
            let e = p.t * c_inv % l;
            if &e < self.degree_bound && (&e % r).to_usize() == Some(p.slot) {
                out.push((e, p.c));
            }
        }
        let w = l.bits().div_ceil(64);
        metrics::count(out.len() as u64 * w * w * 6);
        out
    }
}

fn subtract_terms(plain: &mut DenseCyclicPoly, shifted: &mut DenseCyclicPoly, terms: &BTreeMap<BigUint, BigInt>, l: &BigUint) {
    let m = plain.modulus().clone();
    let r = plain.len();
    for (e, c) in terms {
        let slot = (e % r).to_usize().unwrap();
        let cp = rem_euclid_big(c, &m);
        let cs = &cp * (e * l + 1u32) % &m;
        plain.sub_at(slot, &cp);
        shifted.sub_at(slot, &cs);
    }
    let w = m.bits().div_ceil(64);
    metrics::count(terms.len() as u64 * w * w * 2);
}

fn degree(f: &SparsePoly) -> Result<BigUint> {
    let mut top = BigInt::zero();
    for e in f.exponents() {
        if e.is_negative() {
            return Err(Error::invalid("exponents must be nonnegative"));
        }
        if *e > top {
            top = e.clone();
        }
    }
    Ok(top.magnitude().clone())
}

/// Evaluates a univariate polynomial with nonnegative exponents at `x mod q`.
fn eval_in<F: PrimeField>(fld: &F, f: &SparsePoly, x: &F::E) -> F::E {
    let q = fld.modulus();
    f.univariate_terms().fold(fld.zero(), |acc, (c, e)| {
        let t = fld.mul(&fld.from_big(&rem_euclid_big(c, q)), &fld.pow(x, e.magnitude()));
        fld.add(&acc, &t)
    })
}

fn product_holds<F: PrimeField>(fld: &F, f: &SparsePoly, g: &SparsePoly, h: &SparsePoly, x: &BigUint) -> bool {
    let x = fld.from_big(x);
    fld.mul(&eval_in(fld, f, &x), &eval_in(fld, g, &x)) == eval_in(fld, h, &x)
}

fn verify(f: &SparsePoly, g: &SparsePoly, h: &SparsePoly, degree_bound: &BigUint, mu: f64, rng: &mut RandomSource) -> bool {
    // A nonzero difference of degree < D vanishes at a random point of Z_q
    // with probability below D / q <= 2^-20.
    let floor = (degree_bound << 20u32).max(BigUint::one() << 61u32);
    let q = next_prime(&floor);
    let checks = ((8.0 / mu).log2() / 20.0).ceil().max(1.0) as usize;
    (0..checks).all(|_| {
        let x = rng.below(&q);
        with_field(&q, |fld| product_holds(fld, f, g, h, &x), |fld| product_holds(fld, f, g, h, &x))
    })
}

/// `FG` for univariate `F, G` with nonnegative exponents, where `s` bounds
/// `#F + #G + #(FG)`. Correct with probability at least `1 - mu`.
pub fn basecase_multiply(f: &SparsePoly, g: &SparsePoly, s: u64, mu: f64, rng: &mut RandomSource) -> Result<SparsePoly> {
    basecase_multiply_with(f, g, s, mu, &Config::default(), rng)
}

pub fn basecase_multiply_with(
    f: &SparsePoly,
    g: &SparsePoly,
    s: u64,
    mu: f64,
    cfg: &Config,
    rng: &mut RandomSource,
) -> Result<SparsePoly> {
    if f.nvars() != 1 || g.nvars() != 1 {
        return Err(Error::invalid("univariate polynomials required"));
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::invalid("failure probability must be in (0,1)"));
    }
    let degree_bound = degree(f)? + degree(g)? + 1u32;
    if f.is_zero() || g.is_zero() {
        return Ok(SparsePoly::zero(1));
    }
    let s = s.max(1);
    let (hf, hg) = (f.height(), g.height());
    let height_bound = BigUint::from(f.sparsity().min(g.sparsity())) * &hf * &hg;
    let prime_floor = (&degree_bound << 2u32)
        .max(BigUint::from(s) * 4u32 * &hf * &hg)
        .max(BigUint::from(21u32));
    let l = get_prime_big(&prime_floor, mu / 4.0, rng)?;
    let m = &l * &l;
    let decoder = Decoder { l: &l, m: &m, degree_bound: &degree_bound, height_bound: &height_bound };

    let rounds = ((s as f64).log2() + 1.0).ceil() as u64 * (8.0 * (4.0 / mu).ln()).ceil() as u64;
    let mut found: BTreeMap<BigUint, BigInt> = BTreeMap::new();
    for _ in 0..rounds {
        let mut decoded: Vec<HashMap<BigUint, BigInt>> = Vec::with_capacity(2);
        let mut residual_zero = true;
        for _ in 0..2 {
            let r = match get_hash_prime(2 * s, &degree_bound, 0.5, 0.25, cfg, rng) {
                Ok(r) => r,
                Err(Error::Fail(_)) => {
                    residual_zero = false;
                    decoded.push(HashMap::new());
                    continue;
                }
                Err(e) => return Err(e),
            };
            let r = r
                .to_u64()
                .filter(|&v| v <= MAX_CYCLIC_LEN)
                .ok_or_else(|| Error::invalid(format!("cyclic length {r} too large to materialize")))?
                as usize;
            let (mut plain, mut shifted) = encoded_images(f, g, &l, r, cfg.dense)?;
            subtract_terms(&mut plain, &mut shifted, &found, &l);
            let mut pending = Vec::new();
            for j in 0..r {
                if plain.is_zero_at(j) && shifted.is_zero_at(j) {
                    continue;
                }
                residual_zero = false;
                pending.extend(decoder.screen(j, &plain.coeff(j), &shifted.coeff(j)));
            }
            let cands: HashMap<BigUint, BigInt> = decoder.finish(r, pending).into_iter().collect();
            metrics::count(r as u64);
            decoded.push(cands);
        }
        if residual_zero {
            let h = to_poly(&found);
            if verify(f, g, &h, &degree_bound, mu, rng) {
                return Ok(h);
            }
            continue;
        }
        let (first, second) = (&decoded[0], &decoded[1]);
        for (e, c) in first {
            if second.get(e) == Some(c) {
                let entry = found.entry(e.clone()).or_insert_with(BigInt::zero);
                *entry += c;
                if entry.is_zero() {
                    found.remove(e);
                }
            }
        }
    }
    Err(Error::Fail(FailKind::Peeling))
}

fn to_poly(found: &BTreeMap<BigUint, BigInt>) -> SparsePoly {
    SparsePoly::univariate_sorted(found.iter().map(|(e, c)| (c.clone(), BigInt::from(e.clone()))).collect())
}
