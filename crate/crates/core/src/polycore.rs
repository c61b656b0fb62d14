//! Sparse and dense-cyclic polynomial representations.

use crate::arith::ntt::{convolve, Limbs, MixedRadix};
use crate::arith::{limbs_of, rem_euclid_big, width_for};
use crate::config::DenseStrategy;
use crate::error::{Error, Result};
use crate::metrics;
use crate::rng::from_u64_digits;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: BigInt,
    pub exps: Vec<BigInt>,
}

/// Polynomial in `nvars` variables with integer coefficients and integer
/// (possibly negative) exponents, stored as a list of nonzero terms sorted by
/// exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: Vec<Term>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: Vec::new() }
    }

    /// Builds a canonical polynomial: like terms are merged, zeros dropped.
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::invalid("at least one variable is required"));
        }
        let mut map: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
        for t in terms {
            if t.exps.len() != nvars {
                return Err(Error::invalid(format!(
                    "term has {} exponents, expected {nvars}",
                    t.exps.len()
                )));
            }
            *map.entry(t.exps).or_default() += t.coeff;
        }
        Ok(Self::from_map(nvars, map))
    }

    pub(crate) fn from_map(nvars: usize, map: BTreeMap<Vec<BigInt>, BigInt>) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coeff)| Term { coeff, exps })
            .collect();
        SparsePoly { nvars, terms }
    }

    /// Univariate polynomial from `(coefficient, exponent)` pairs.
    pub fn univariate<C: Into<BigInt>, E: Into<BigInt>>(pairs: impl IntoIterator<Item = (C, E)>) -> Self {
        let mut map: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
        for (c, e) in pairs {
            *map.entry(vec![e.into()]).or_default() += c.into();
        }
        Self::from_map(1, map)
    }

    /// Univariate polynomial from terms already sorted by strictly
    /// increasing exponent with nonzero coefficients.
    pub(crate) fn univariate_sorted(terms: Vec<(BigInt, BigInt)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].1 < w[1].1));
        debug_assert!(terms.iter().all(|(c, _)| !c.is_zero()));
        SparsePoly {
            nvars: 1,
            terms: terms.into_iter().map(|(coeff, e)| Term { coeff, exps: vec![e] }).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of nonzero terms.
    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest absolute coefficient (0 for the zero polynomial).
    pub fn height(&self) -> BigUint {
        self.terms.iter().map(|t| t.coeff.magnitude().clone()).max().unwrap_or_default()
    }

    pub fn one_norm(&self) -> BigUint {
        self.terms.iter().map(|t| t.coeff.magnitude()).sum()
    }

    fn require_univariate(&self) -> Result<()> {
        if self.nvars == 1 {
            Ok(())
        } else {
            Err(Error::invalid("univariate polynomial required"))
        }
    }

    /// Exponents of a univariate polynomial, in increasing order.
    pub fn exponents(&self) -> impl Iterator<Item = &BigInt> + '_ {
        self.terms.iter().map(|t| &t.exps[0])
    }

    /// Support of a univariate polynomial.
    pub fn support(&self) -> Result<ExponentSet> {
        self.require_univariate()?;
        Ok(ExponentSet { elems: self.exponents().cloned().collect() })
    }

    /// `(coefficient, exponent)` pairs of a univariate polynomial.
    pub fn univariate_terms(&self) -> impl Iterator<Item = (&BigInt, &BigInt)> + '_ {
        self.terms.iter().map(|t| (&t.coeff, &t.exps[0]))
    }

    /// Smallest and largest exponent in each variable.
    pub fn exponent_bounds(&self) -> Option<Vec<(BigInt, BigInt)>> {
        let first = self.terms.first()?;
        let mut b: Vec<(BigInt, BigInt)> = first.exps.iter().map(|e| (e.clone(), e.clone())).collect();
        for t in &self.terms[1..] {
            for (bound, e) in b.iter_mut().zip(&t.exps) {
                if *e < bound.0 {
                    bound.0 = e.clone();
                }
                if *e > bound.1 {
                    bound.1 = e.clone();
                }
            }
        }
        Some(b)
    }

    /// Multiplies by the monomial with exponent vector `shift`.
    pub fn shifted(&self, shift: &[BigInt]) -> SparsePoly {
        assert_eq!(shift.len(), self.nvars);
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.clone(),
                    exps: t.exps.iter().zip(shift).map(|(e, s)| e + s).collect(),
                })
                .collect(),
        }
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs(&self, mut f: impl FnMut(&BigInt) -> BigInt) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter_map(|t| {
                    let c = f(&t.coeff);
                    (!c.is_zero()).then(|| Term { coeff: c, exps: t.exps.clone() })
                })
                .collect(),
        }
    }

    /// Text form: header line `sp 1 <nvars>` then one `<coeff> <e1> ... <en>`
    /// line per term.
    pub fn to_text(&self) -> String {
        let mut s = format!("sp 1 {}\n", self.nvars);
        for t in &self.terms {
            write!(s, "{}", t.coeff).unwrap();
            for e in &t.exps {
                write!(s, " {e}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let bad = |msg: &str| Error::Parse { line: hline, msg: msg.into() };
        if parts.len() != 3 || parts[0] != "sp" {
            return Err(bad("expected header `sp 1 <nvars>`"));
        }
        if parts[1] != "1" {
            return Err(bad("unsupported format version"));
        }
        let nvars: usize = parts[2].parse().map_err(|_| bad("bad variable count"))?;
        if nvars == 0 {
            return Err(bad("variable count must be positive"));
        }
        let mut terms = Vec::new();
        for (ln, line) in lines {
            let nums = line
                .split_whitespace()
                .map(|w| w.parse::<BigInt>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: ln, msg: e.to_string() })?;
            if nums.len() != nvars + 1 {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("expected {} integers, found {}", nvars + 1, nums.len()),
                });
            }
            let mut it = nums.into_iter();
            let coeff = it.next().unwrap();
            terms.push(Term { coeff, exps: it.collect() });
        }
        SparsePoly::new(nvars, terms)
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, t))
    })
}

/// Sorted, duplicate-free set of integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExponentSet {
    elems: Vec<BigInt>,
}

impl ExponentSet {
    pub fn new(mut elems: Vec<BigInt>) -> Self {
        elems.sort();
        elems.dedup();
        ExponentSet { elems }
    }

    pub fn elems(&self) -> &[BigInt] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn min(&self) -> Option<&BigInt> {
        self.elems.first()
    }

    pub fn max(&self) -> Option<&BigInt> {
        self.elems.last()
    }

    /// `max - min` (0 for sets with fewer than two elements).
    pub fn width(&self) -> BigInt {
        match (self.min(), self.max()) {
            (Some(a), Some(b)) => b - a,
            _ => BigInt::zero(),
        }
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn union(&self, other: &ExponentSet) -> ExponentSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() || j < other.len() {
            let take_left = j >= other.len() || (i < self.len() && self.elems[i] <= other.elems[j]);
            if take_left {
                if j < other.len() && self.elems[i] == other.elems[j] {
                    j += 1;
                }
                out.push(self.elems[i].clone());
                i += 1;
            } else {
                out.push(other.elems[j].clone());
                j += 1;
            }
        }
        ExponentSet { elems: out }
    }

    /// One decimal integer per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.elems {
            writeln!(s, "{e}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let elems = content_lines(text)
            .map(|(ln, l)| l.parse::<BigInt>().map_err(|e| Error::Parse { line: ln, msg: e.to_string() }))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExponentSet::new(elems))
    }
}

impl FromIterator<BigInt> for ExponentSet {
    fn from_iter<I: IntoIterator<Item = BigInt>>(iter: I) -> Self {
        ExponentSet::new(iter.into_iter().collect())
    }
}

/// Element of `Z_m[x]/(x^p - 1)`: `p` residues in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseCyclicPoly {
    modulus: BigUint,
    width: usize,
    data: Vec<u64>,
}

impl DenseCyclicPoly {
    pub fn zero(len: usize, modulus: &BigUint) -> Result<Self> {
        if len == 0 {
            return Err(Error::invalid("cyclic length must be positive"));
        }
        if modulus.is_zero() {
            return Err(Error::invalid("modulus must be positive"));
        }
        let width = width_for(modulus);
        Ok(DenseCyclicPoly { modulus: modulus.clone(), width, data: vec![0; len * width] })
    }

    /// From explicit coefficients, reducing each modulo `m`.
    pub fn from_coeffs(modulus: &BigUint, coeffs: &[BigUint]) -> Result<Self> {
        let mut d = Self::zero(coeffs.len(), modulus)?;
        for (i, c) in coeffs.iter().enumerate() {
            d.set(i, &(c % modulus));
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    fn slot(&self, i: usize) -> &[u64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn coeff(&self, i: usize) -> BigUint {
        from_u64_digits(self.slot(i))
    }

    pub fn coeffs(&self) -> Vec<BigUint> {
        (0..self.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero_at(&self, i: usize) -> bool {
        self.slot(i).iter().all(|w| *w == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|w| *w == 0)
    }

    /// Number of nonzero entries.
    pub fn nonzero_count(&self) -> usize {
        (0..self.len()).filter(|&i| !self.is_zero_at(i)).count()
    }

    /// Indices of nonzero entries.
    pub fn nonzero_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.is_zero_at(i))
    }

    /// `v` must already be reduced.
    pub(crate) fn set(&mut self, i: usize, v: &BigUint) {
        let w = self.width;
        limbs_of(v, w, &mut self.data[i * w..(i + 1) * w]);
    }

    /// Adds a residue (given in `[0, m)`) to entry `i`.
    pub(crate) fn add_at(&mut self, i: usize, v: &BigUint) {
        let mut s = self.coeff(i) + v;
        if s >= self.modulus {
            s -= &self.modulus;
        }
        self.set(i, &s);
    }

    /// Subtracts a residue (given in `[0, m)`) from entry `i`.
    pub(crate) fn sub_at(&mut self, i: usize, v: &BigUint) {
        let c = self.coeff(i);
        let d = if c >= *v { c - v } else { c + &self.modulus - v };
        self.set(i, &d);
    }

    fn limbs(&self) -> Limbs<'_> {
        Limbs { data: &self.data, width: self.width, bits: self.modulus.bits() }
    }
}

/// Image of a univariate `F` in `Z_m[x]/(x^p - 1)`. Exponents are reduced
/// into `[0, p)`, so Laurent terms are accepted.
pub fn reduce_cyclic(f: &SparsePoly, p: usize, m: &BigUint) -> Result<DenseCyclicPoly> {
    f.require_univariate()?;
    let mut out = DenseCyclicPoly::zero(p, m)?;
    let pb = BigUint::from(p);
    for (c, e) in f.univariate_terms() {
        let slot = rem_euclid_big(e, &pb).to_usize().unwrap();
        out.add_at(slot, &rem_euclid_big(c, m));
    }
    metrics::count((f.sparsity() * (out.width + 1)) as u64);
    Ok(out)
}

/// Image of `F(alpha z)` in `Z_q[z]/(z^r - 1)`: term `c x^e` contributes
/// `c alpha^e` at index `e mod r`. Negative exponents need `alpha` invertible.
pub fn scale_arg_reduce(f: &SparsePoly, alpha: &BigUint, r: usize, q: &BigUint) -> Result<DenseCyclicPoly> {
    f.require_univariate()?;
    let mut out = DenseCyclicPoly::zero(r, q)?;
    let rb = BigUint::from(r);
    let a = alpha % q;
    let a_inv = if f.exponents().any(|e| e.is_negative()) {
        Some(inverse_mod(&a, q).ok_or_else(|| Error::invalid("negative exponent with non-invertible scale"))?)
    } else {
        None
    };
    for (c, e) in f.univariate_terms() {
        let base = if e.is_negative() { a_inv.as_ref().unwrap() } else { &a };
        let pw = base.modpow(e.magnitude(), q);
        let v = rem_euclid_big(c, q) * pw % q;
        out.add_at(rem_euclid_big(e, &rb).to_usize().unwrap(), &v);
        let w = out.width as u64;
        metrics::count(w * w * (e.bits().max(1) + 1));
    }
    Ok(out)
}

pub(crate) fn inverse_mod(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if let Some(m @ 1..=WORD_INVERSE_MAX) = m.to_u128() {
        let a = (a % m).to_u128().unwrap_or(0);
        return inverse_mod_word(a, m).map(BigUint::from);
    }
    let e = BigInt::from(a.clone()).extended_gcd(&BigInt::from(m.clone()));
    e.gcd.is_one().then(|| rem_euclid_big(&e.x, m))
}

const WORD_INVERSE_MAX: u128 = 1 << 126;

fn inverse_mod_word(a: u128, m: u128) -> Option<u128> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u128)
}

/// Cyclic product in `Z_m[x]/(x^p - 1)`: schoolbook for short inputs,
/// transform-based otherwise.
pub fn dense_mul_cyclic(a: &DenseCyclicPoly, b: &DenseCyclicPoly) -> Result<DenseCyclicPoly> {
    dense_mul_cyclic_with(a, b, DenseStrategy::Dense)
}

const SCHOOLBOOK_LEN: usize = 64;

pub fn dense_mul_cyclic_with(a: &DenseCyclicPoly, b: &DenseCyclicPoly, strategy: DenseStrategy) -> Result<DenseCyclicPoly> {
    if a.len() != b.len() {
        return Err(Error::invalid("cyclic lengths differ"));
    }
    if a.modulus != b.modulus {
        return Err(Error::invalid("moduli differ"));
    }
    let r = a.len();
    match strategy {
        DenseStrategy::Dense if r <= SCHOOLBOOK_LEN => Ok(mul_direct(a, b)),
        DenseStrategy::Dense => Ok(mul_transform(a, b)),
        DenseStrategy::Auto => {
            let na = a.nonzero_count() as u64;
            let nb = b.nonzero_count() as u64;
            let w = a.width as u64;
            let direct = na * nb * (w * w + 2);
            let n = (2 * r).next_power_of_two() as u64;
            let primes = (2 * a.modulus.bits()).div_ceil(61) + 1;
            let transform = primes * (n * (3 * n.trailing_zeros() as u64 / 2 + 4) + r as u64 * (w + primes));
            if direct <= transform {
                Ok(mul_direct(a, b))
            } else {
                Ok(mul_transform(a, b))
            }
        }
    }
}

fn mul_direct(a: &DenseCyclicPoly, b: &DenseCyclicPoly) -> DenseCyclicPoly {
    let r = a.len();
    let m = &a.modulus;
    let mut out = DenseCyclicPoly { modulus: m.clone(), width: a.width, data: vec![0; a.data.len()] };
    let bn: Vec<usize> = b.nonzero_slots().collect();
    let w = a.width as u64;
    if let Some(m64) = m.to_u64() {
        let mut acc = vec![0u64; r];
        for i in a.nonzero_slots() {
            let x = a.data[i] as u128;
            for &j in &bn {
                let k = if i + j >= r { i + j - r } else { i + j };
                let t = (x * b.data[j] as u128 + acc[k] as u128) % m64 as u128;
                acc[k] = t as u64;
            }
        }
        metrics::count((a.nonzero_count() * bn.len()) as u64 * 2);
        out.data = acc;
        return out;
    }
    let mut acc = vec![BigUint::zero(); r];
    let bv: Vec<(usize, BigUint)> = bn.iter().map(|&j| (j, b.coeff(j))).collect();
    let mut pairs = 0u64;
    for i in a.nonzero_slots() {
        let x = a.coeff(i);
        for (j, y) in &bv {
            let k = (i + j) % r;
            acc[k] += &x * y;
            pairs += 1;
        }
    }
    metrics::count(pairs * (w * w + 2));
    for (k, v) in acc.into_iter().enumerate() {
        if !v.is_zero() {
            out.set(k, &(v % m));
        }
    }
    out
}

fn mul_transform(a: &DenseCyclicPoly, b: &DenseCyclicPoly) -> DenseCyclicPoly {
    let r = a.len();
    let mr = convolve(a.limbs(), b.limbs(), Some(r));
    let mut out = DenseCyclicPoly { modulus: a.modulus.clone(), width: a.width, data: vec![0; a.data.len()] };
    reduce_mixed_into(&mr, &mut out);
    out
}

fn reduce_mixed_into(mr: &MixedRadix, out: &mut DenseCyclicPoly) {
    let k = mr.k();
    if let Some(m64) = out.modulus.to_u64() {
        let m = m64 as u128;
        let primes: Vec<u128> = mr.primes.iter().map(|p| *p as u128 % m).collect();
        for i in 0..mr.len {
            let d = mr.entry(i);
            let mut x = d[k - 1] as u128 % m;
            for j in (0..k - 1).rev() {
                x = (x * primes[j] + d[j] as u128) % m;
            }
            out.data[i] = x as u64;
        }
        metrics::count((mr.len * k) as u64);
        return;
    }
    let mut buf = Vec::new();
    for i in 0..mr.len {
        mr.exact(i, &mut buf);
        let v = from_u64_digits(&buf) % &out.modulus;
        out.set(i, &v);
    }
    let w = out.width as u64;
    metrics::count(mr.len as u64 * w * (k as u64));
}

/// Packs a multivariate polynomial into one variable by reading exponent
/// vectors as base-`2d` numbers: `x_i -> z^((2d)^(i-1))`. Every exponent
/// must satisfy `|e| < d`.
pub fn kronecker_pack(f: &SparsePoly, d: &BigUint) -> Result<SparsePoly> {
    if d.is_zero() {
        return Err(Error::invalid("bound must be positive"));
    }
    let base = BigInt::from(d << 1u32);
    let di = BigInt::from(d.clone());
    let mut map = BTreeMap::new();
    for t in f.terms() {
        let mut packed = BigInt::zero();
        for e in t.exps.iter().rev() {
            if e.abs() >= di {
                return Err(Error::invalid(format!("exponent {e} outside (-{d}, {d})")));
            }
            packed = packed * &base + e;
        }
        *map.entry(vec![packed]).or_insert_with(BigInt::zero) += &t.coeff;
    }
    Ok(SparsePoly::from_map(1, map))
}

/// Inverse of `kronecker_pack`.
pub fn kronecker_unpack(f: &SparsePoly, nvars: usize, d: &BigUint) -> Result<SparsePoly> {
    f.require_univariate()?;
    if d.is_zero() || nvars == 0 {
        return Err(Error::invalid("bound and variable count must be positive"));
    }
    let base = BigInt::from(d << 1u32);
    let di = BigInt::from(d.clone());
    // Offset sum_i d (2d)^(i-1) turns every digit nonnegative.
    let mut offset = BigInt::zero();
    let mut limit = BigInt::one();
    for _ in 0..nvars {
        offset = offset * &base + &di;
        limit *= &base;
    }
    let mut terms = Vec::with_capacity(f.sparsity());
    for (c, e) in f.univariate_terms() {
        let mut v = e + &offset;
        if v.is_negative() || v >= limit {
            return Err(Error::invalid(format!("exponent {e} does not decode")));
        }
        let mut exps = Vec::with_capacity(nvars);
        for _ in 0..nvars {
            let (q, r) = v.div_rem(&base);
            exps.push(r - &di);
            v = q;
        }
        terms.push(Term { coeff: c.clone(), exps });
    }
    SparsePoly::new(nvars, terms)
}

/// Splits a univariate `F` as `x^shift * G` with `G` having minimum exponent 0.
pub fn laurent_normalize(f: &SparsePoly) -> Result<(SparsePoly, BigInt)> {
    f.require_univariate()?;
    let Some(first) = f.terms.first() else {
        return Ok((SparsePoly::zero(1), BigInt::zero()));
    };
    let shift = first.exps[0].clone();
    Ok((f.shifted(&[-shift.clone()]), shift))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn word_inverse_matches_big() {
        let m = (1u64 << 61) - 1;
        for a in [1u64, 2, 12345, m - 1, m + 3] {
            let inv = inverse_mod(&big(a), &big(m)).unwrap();
            assert_eq!(inv * big(a) % big(m), big(1));
        }
        let m = (BigUint::one() << 125u32) - 1u32 + 2u32;
        for a in [big(3), big(7), big(u64::MAX), &m - 1u32] {
            let e = BigInt::from(a.clone()).extended_gcd(&BigInt::from(m.clone()));
            let want = e.gcd.is_one().then(|| rem_euclid_big(&e.x, &m));
            assert_eq!(inverse_mod(&a, &m), want);
        }
        assert_eq!(inverse_mod(&big(6), &big(9)), None);
        assert_eq!(inverse_mod(&big(4), &big(1)), Some(big(0)));
    }

    fn coeffs(d: &DenseCyclicPoly) -> Vec<u64> {
        d.coeffs().iter().map(|c| c.to_u64().unwrap()).collect()
    }

    fn dense(m: u64, v: &[u64]) -> DenseCyclicPoly {
        DenseCyclicPoly::from_coeffs(&big(m), &v.iter().map(|x| big(*x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let f = SparsePoly::univariate([(1, 1), (1, 6), (3, 7)]);
        assert_eq!(coeffs(&reduce_cyclic(&f, 5, &big(100)).unwrap()), vec![0, 2, 3, 0, 0]);
        let f = SparsePoly::univariate([(1, -1)]);
        assert_eq!(coeffs(&reduce_cyclic(&f, 5, &big(7)).unwrap()), vec![0, 0, 0, 0, 1]);
        let z = SparsePoly::zero(1);
        assert_eq!(coeffs(&reduce_cyclic(&z, 3, &big(7)).unwrap()), vec![0, 0, 0]);
        assert!(reduce_cyclic(&f, 0, &big(7)).is_err());
        assert!(reduce_cyclic(&f, 3, &big(0)).is_err());
    }

    #[test]
    fn dense_mul_examples() {
        let p = dense_mul_cyclic(&dense(5, &[1, 1]), &dense(5, &[1, 1])).unwrap();
        assert_eq!(coeffs(&p), vec![2, 2]);
        let a = dense(97, &[3, 5, 7, 11]);
        assert_eq!(dense_mul_cyclic(&a, &dense(97, &[1, 0, 0, 0])).unwrap(), a);
        let p = dense_mul_cyclic(&dense(7, &[0, 1]), &dense(7, &[0, 1])).unwrap();
        assert_eq!(coeffs(&p), vec![1, 0]);
        assert!(dense_mul_cyclic(&dense(7, &[0, 1]), &dense(5, &[0, 1])).is_err());
        assert!(dense_mul_cyclic(&dense(7, &[0, 1]), &dense(7, &[0, 1, 2])).is_err());
    }

    #[test]
    fn strategies_agree_on_long_inputs() {
        let m: BigUint = (BigUint::one() << 150u32) + 12345u32;
        let r = 300;
        let a: Vec<BigUint> = (0..r).map(|i| (&m - 1u32 - BigUint::from(i as u64 * 31)) * ((i % 3) as u32)).collect();
        let b: Vec<BigUint> = (0..r).map(|i| BigUint::from(i as u64 * i as u64) << 100u32).collect();
        let a = DenseCyclicPoly::from_coeffs(&m, &a).unwrap();
        let b = DenseCyclicPoly::from_coeffs(&m, &b).unwrap();
        let t = mul_transform(&a, &b);
        assert_eq!(t, mul_direct(&a, &b));
        assert_eq!(t, dense_mul_cyclic_with(&a, &b, DenseStrategy::Auto).unwrap());
        let small = dense(1000, &(0..200).map(|i| i * 7 % 1000).collect::<Vec<_>>());
        assert_eq!(mul_transform(&small, &small), mul_direct(&small, &small));
    }

    #[test]
    fn scale_examples() {
        let f = SparsePoly::univariate([(1, 1)]);
        assert_eq!(coeffs(&scale_arg_reduce(&f, &big(2), 3, &big(7)).unwrap()), vec![0, 2, 0]);
        let f = SparsePoly::univariate([(1, 0), (1, 2)]);
        assert_eq!(coeffs(&scale_arg_reduce(&f, &big(1), 2, &big(5)).unwrap()), vec![2, 0]);
        let f = SparsePoly::univariate([(3, 5)]);
        assert_eq!(coeffs(&scale_arg_reduce(&f, &big(2), 4, &big(11)).unwrap())[1], 8);
        let f = SparsePoly::univariate([(1, -1)]);
        // 2^-1 = 4 mod 7, at index -1 mod 3 = 2.
        assert_eq!(coeffs(&scale_arg_reduce(&f, &big(2), 3, &big(7)).unwrap()), vec![0, 0, 4]);
    }

    fn xy(terms: &[(i64, i64, i64)]) -> SparsePoly {
        SparsePoly::new(
            2,
            terms.iter().map(|(c, a, b)| Term { coeff: (*c).into(), exps: vec![(*a).into(), (*b).into()] }),
        )
        .unwrap()
    }

    #[test]
    fn kronecker_examples() {
        let f = xy(&[(1, 1, 0), (1, 0, 2)]);
        let packed = kronecker_pack(&f, &big(3)).unwrap();
        assert_eq!(packed, SparsePoly::univariate([(1, 1), (1, 12)]));
        assert_eq!(kronecker_unpack(&packed, 2, &big(3)).unwrap(), f);
        let c = xy(&[(5, 0, 0)]);
        assert_eq!(kronecker_pack(&c, &big(3)).unwrap(), SparsePoly::univariate([(5, 0)]));
        let inv = SparsePoly::univariate([(1, -1)]);
        let p = kronecker_pack(&inv, &big(3)).unwrap();
        assert_eq!(kronecker_unpack(&p, 1, &big(3)).unwrap(), inv);
        assert!(kronecker_pack(&xy(&[(1, 3, 0)]), &big(3)).is_err());
        assert!(kronecker_unpack(&SparsePoly::univariate([(1, 100)]), 2, &big(3)).is_err());
    }

    #[test]
    fn laurent_examples() {
        let (g, s) = laurent_normalize(&SparsePoly::univariate([(1, -2), (1, 1)])).unwrap();
        assert_eq!((g, s), (SparsePoly::univariate([(1, 0), (1, 3)]), BigInt::from(-2)));
        let (g, s) = laurent_normalize(&SparsePoly::univariate([(5, 0)])).unwrap();
        assert_eq!((g, s), (SparsePoly::univariate([(5, 0)]), BigInt::zero()));
        let (g, s) = laurent_normalize(&SparsePoly::univariate([(1, 7)])).unwrap();
        assert_eq!((g, s), (SparsePoly::univariate([(1, 0)]), BigInt::from(7)));
        let (g, s) = laurent_normalize(&SparsePoly::zero(1)).unwrap();
        assert!(g.is_zero() && s.is_zero());
    }

    #[test]
    fn canonical_form_and_text() {
        let f = SparsePoly::univariate([(2, 5), (-2, 5), (3, -1), (4, 2), (1, 2)]);
        assert_eq!(f, SparsePoly::univariate([(3, -1), (5, 2)]));
        let text = f.to_text();
        assert_eq!(text, "sp 1 1\n3 -1\n5 2\n");
        assert_eq!(SparsePoly::parse(&text).unwrap(), f);
        let g = SparsePoly::parse("# comment\n\nsp 1 2\n1 0 0\n\n-7 3 -4\n").unwrap();
        assert_eq!(g.sparsity(), 2);
        assert_eq!(g.height(), big(7));
        assert_eq!(g.one_norm(), big(8));
        assert!(matches!(SparsePoly::parse("sp 1 2\n1 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(SparsePoly::parse("sp 2 1\n").is_err());
        let s = ExponentSet::parse("5\n-1\n# x\n5\n3\n").unwrap();
        assert_eq!(s.to_text(), "-1\n3\n5\n");
        assert_eq!(s.width(), BigInt::from(6));
    }

    #[test]
    fn union_merges() {
        let a = ExponentSet::new(vec![1.into(), 3.into(), 5.into()]);
        let b = ExponentSet::new(vec![0.into(), 3.into(), 9.into()]);
        let u = a.union(&b);
        assert_eq!(u.elems(), &[0.into(), 1.into(), 3.into(), 5.into(), 9.into()] as &[BigInt]);
    }
}
