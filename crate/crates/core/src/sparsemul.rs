//! Sparse products over the integers, and over `Z_m` and multivariate or
//! Laurent rings by reduction to the univariate integer case.
//!
//! `mul_known_support` recovers the coefficients of `FG` when a superset of
//! its support is known: exponents are hashed to residues modulo a prime
//! `p`, every factor is evaluated at powers of an element of order `p`
//! modulo several primes `q`, and the product's coefficients come back from
//! one transposed Vandermonde solve per `q` plus Chinese remaindering.
//!
//! `sparse_mult_zz` first finds the possible support as a sumset, then runs
//! the recovery once on coefficients reduced by a prime that no true
//! coefficient vanishes under, which exposes the actual support, and once
//! more on that support with full coefficients.

use crate::arith::field::PrimeField;
use crate::config::Config;
use crate::error::{Error, FailKind, Result};
use crate::metrics;
use crate::numtheory::{centered, get_prim_roots, get_vanish_prime, CrtBasis, PrimRootBundle};
use crate::polycore::{kronecker_pack, kronecker_unpack, ExponentSet, SparsePoly, Term};
use crate::rng::RandomSource;
use crate::sumset::sumset_with;
use crate::vander::{with_field, Plan};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use std::collections::HashSet;

/// Two polynomials written over a shared exponent list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportedPair {
    pub exps: ExponentSet,
    pub fcoeffs: Vec<BigInt>,
    pub gcoeffs: Vec<BigInt>,
}

impl SupportedPair {
    pub fn new(exps: ExponentSet, fcoeffs: Vec<BigInt>, gcoeffs: Vec<BigInt>) -> Result<Self> {
        if fcoeffs.len() != exps.len() || gcoeffs.len() != exps.len() {
            return Err(Error::invalid("coefficient vectors must match the exponent list"));
        }
        Ok(SupportedPair { exps, fcoeffs, gcoeffs })
    }

    /// `F` and `G` over `support` extended by their own supports.
    pub fn from_polys(support: &ExponentSet, f: &SparsePoly, g: &SparsePoly) -> Result<Self> {
        let exps = support.union(&f.support()?).union(&g.support()?);
        let spread = |p: &SparsePoly| {
            let mut out = vec![BigInt::zero(); exps.len()];
            for (c, e) in p.univariate_terms() {
                let i = exps.elems().binary_search(e).expect("padded support");
                out[i] = c.clone();
            }
            out
        };
        let (fcoeffs, gcoeffs) = (spread(f), spread(g));
        Ok(SupportedPair { exps, fcoeffs, gcoeffs })
    }
}

/// Word operations spent finding the support and recovering the coefficients.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MulStats {
    pub support_word_ops: u64,
    pub coefficient_word_ops: u64,
}

fn max_abs(v: &[BigInt]) -> BigUint {
    v.iter().map(|c| c.magnitude().clone()).max().unwrap_or_default()
}

/// Residues of the exponents modulo `p`, if pairwise distinct.
fn residues(exps: &ExponentSet, p: &BigUint) -> Option<Vec<BigUint>> {
    let r: Vec<BigUint> = exps.elems().iter().map(|e| crate::arith::rem_euclid_big(e, p)).collect();
    let mut seen = HashSet::with_capacity(r.len());
    r.iter().all(|x| seen.insert(x)).then_some(r)
}

/// Images of `h` modulo `q` from evaluations at powers of `omega`, or
/// `None` when the points collide.
fn image<F: PrimeField>(f: &F, omega: &BigUint, res: &[BigUint], sp: &SupportedPair) -> Result<Option<Vec<BigUint>>> {
    let w = f.from_big(omega);
    let v: Vec<F::E> = res.iter().map(|r| f.pow(&w, r)).collect();
    let mut sorted: Vec<BigUint> = v.iter().map(|x| f.to_big(x)).collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Ok(None);
    }
    let q = f.modulus();
    let lower = |c: &[BigInt]| -> Vec<F::E> { c.iter().map(|x| f.from_big(&crate::arith::rem_euclid_big(x, q))).collect() };
    let mut plan = Plan::new(f, v);
    let a = plan.apply(&lower(&sp.fcoeffs));
    let b = plan.apply(&lower(&sp.gcoeffs));
    let c: Vec<F::E> = a.iter().zip(&b).map(|(x, y)| f.mul(x, y)).collect();
    let h = plan.solve(&c)?;
    Ok(Some(h.iter().map(|x| f.to_big(x)).collect()))
}

fn recover(sp: &SupportedPair, bundle: &PrimRootBundle, res: &[BigUint], c: &BigUint) -> Result<Option<Vec<BigInt>>> {
    let mut moduli = Vec::new();
    let mut images = Vec::new();
    for (q, omega) in &bundle.pairs {
        let img = with_field(q, |f| image(f, omega, res, sp), |f| image(f, omega, res, sp))?;
        if let Some(img) = img {
            moduli.push(q.clone());
            images.push(img);
        }
    }
    let basis = CrtBasis::new(moduli)?;
    if *basis.product() < (c << 1u32) {
        return Ok(None);
    }
    let mut column = vec![BigUint::zero(); images.len()];
    let out = (0..sp.exps.len())
        .map(|i| {
            for (slot, img) in column.iter_mut().zip(&images) {
                *slot = img[i].clone();
            }
            basis.lift_centered(&column)
        })
        .collect();
    Ok(Some(out))
}

/// Coefficients of `FG` on `sp.exps`, which must contain the support of the
/// product. Correct with probability at least `1 - mu`.
pub fn mul_known_support(sp: &SupportedPair, mu: f64, rng: &mut RandomSource) -> Result<Vec<BigInt>> {
    mul_known_support_with(sp, mu, &Config::default(), rng)
}

pub fn mul_known_support_with(sp: &SupportedPair, mu: f64, cfg: &Config, rng: &mut RandomSource) -> Result<Vec<BigInt>> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::invalid("failure probability must be in (0,1)"));
    }
    let s = sp.exps.len();
    let c = max_abs(&sp.fcoeffs) * max_abs(&sp.gcoeffs) * BigUint::from(s);
    if c.is_zero() {
        return Ok(vec![BigInt::zero(); s]);
    }
    let width = sp.exps.width().magnitude() + 1u32;
    for _ in 0..2 {
        let bundle = get_prim_roots(&width, s as u64, &c, mu, cfg, rng)?;
        let Some(res) = residues(&sp.exps, &bundle.p) else {
            continue;
        };
        metrics::count(s as u64 * bundle.p.bits());
        if let Some(h) = recover(sp, &bundle, &res, &c)? {
            return Ok(h);
        }
    }
    Err(Error::Fail(FailKind::KnownSupport))
}

/// `FG` for univariate `F, G` over the integers; correct with probability
/// at least `1 - mu`.
pub fn sparse_mult_zz(f: &SparsePoly, g: &SparsePoly, mu: f64, rng: &mut RandomSource) -> Result<SparsePoly> {
    sparse_mult_zz_with(f, g, mu, &Config::default(), rng)
}

pub fn sparse_mult_zz_with(f: &SparsePoly, g: &SparsePoly, mu: f64, cfg: &Config, rng: &mut RandomSource) -> Result<SparsePoly> {
    sparse_mult_zz_with_stats(f, g, mu, cfg, rng).map(|(h, _)| h)
}

pub fn sparse_mult_zz_with_stats(
    f: &SparsePoly,
    g: &SparsePoly,
    mu: f64,
    cfg: &Config,
    rng: &mut RandomSource,
) -> Result<(SparsePoly, MulStats)> {
    if f.nvars() != 1 || g.nvars() != 1 {
        return Err(Error::invalid("univariate polynomials required"));
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::invalid("failure probability must be in (0,1)"));
    }
    let mut stats = MulStats::default();
    if f.is_zero() || g.is_zero() {
        return Ok((SparsePoly::zero(1), stats));
    }
    let budget = mu / 4.0;
    let start = metrics::word_ops();

    let possible = sumset_with(&f.support()?, &g.support()?, budget, cfg, rng)?;
    let bound = f.height() * g.height() * BigUint::from(f.sparsity().max(g.sparsity()));
    let p = get_vanish_prime(possible.len() as u64, &bound, 1.0, budget, rng)?;
    let reduce = |x: &BigInt| centered(x, &p);
    let coarse = SupportedPair::from_polys(&possible, &f.map_coeffs(reduce), &g.map_coeffs(reduce))?;
    let h1 = mul_known_support_with(&coarse, budget, cfg, rng)?;
    let support: ExponentSet = coarse
        .exps
        .elems()
        .iter()
        .zip(&h1)
        .filter(|(_, c)| !centered(c, &p).is_zero())
        .map(|(e, _)| e.clone())
        .collect();
    let mid = metrics::word_ops();
    stats.support_word_ops = mid - start;

    let fine = SupportedPair::from_polys(&support, f, g)?;
    let h = mul_known_support_with(&fine, budget, cfg, rng)?;
    stats.coefficient_word_ops = metrics::word_ops() - mid;
    let out = SparsePoly::univariate(fine.exps.elems().iter().zip(h).map(|(e, c)| (c, e.clone())));
    Ok((out, stats))
}

/// Coefficient ring for `sparse_mult_ring`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ring {
    Integers,
    /// Integers modulo `m >= 1`, with coefficients kept centered.
    Modular(BigUint),
}

impl Ring {
    fn reduce(&self, f: &SparsePoly) -> SparsePoly {
        match self {
            Ring::Integers => f.clone(),
            Ring::Modular(m) => f.map_coeffs(|c| centered(c, m)),
        }
    }
}

/// `FG` for multivariate Laurent polynomials over `ring`.
pub fn sparse_mult_ring(f: &SparsePoly, g: &SparsePoly, ring: &Ring, mu: f64, rng: &mut RandomSource) -> Result<SparsePoly> {
    sparse_mult_ring_with(f, g, ring, mu, &Config::default(), rng)
}

pub fn sparse_mult_ring_with(
    f: &SparsePoly,
    g: &SparsePoly,
    ring: &Ring,
    mu: f64,
    cfg: &Config,
    rng: &mut RandomSource,
) -> Result<SparsePoly> {
    if f.nvars() != g.nvars() {
        return Err(Error::invalid("operands have different variable counts"));
    }
    if matches!(ring, Ring::Modular(m) if m.is_zero()) {
        return Err(Error::invalid("modulus must be positive"));
    }
    let n = f.nvars();
    let (f, g) = (ring.reduce(f), ring.reduce(g));
    if f.is_zero() || g.is_zero() {
        return Ok(SparsePoly::zero(n));
    }
    if n == 0 {
        let c = &f.terms()[0].coeff * &g.terms()[0].coeff;
        return Ok(ring.reduce(&SparsePoly::new(0, [Term { coeff: c, exps: vec![] }])?));
    }
    let (fb, gb) = (f.exponent_bounds().unwrap(), g.exponent_bounds().unwrap());
    let lows_f: Vec<BigInt> = fb.iter().map(|(lo, _)| lo.clone()).collect();
    let lows_g: Vec<BigInt> = gb.iter().map(|(lo, _)| lo.clone()).collect();
    let d = fb
        .iter()
        .zip(&gb)
        .map(|((fl, fh), (gl, gh))| (fh - fl) + (gh - gl))
        .max()
        .unwrap()
        .magnitude()
        + 1u32;
    let neg = |v: &[BigInt]| v.iter().map(|x| -x).collect::<Vec<_>>();
    let fp = kronecker_pack(&f.shifted(&neg(&lows_f)), &d)?;
    let gp = kronecker_pack(&g.shifted(&neg(&lows_g)), &d)?;
    let hp = sparse_mult_zz_with(&fp, &gp, mu, cfg, rng)?;
    let shift: Vec<BigInt> = lows_f.iter().zip(&lows_g).map(|(a, b)| a + b).collect();
    let h = kronecker_unpack(&hp, n, &d)?.shifted(&shift);
    Ok(ring.reduce(&h))
}

/// Number of terms in `supp F + supp G`, the structural sparsity of `FG`.
pub fn structural_sparsity(f: &SparsePoly, g: &SparsePoly) -> Result<usize> {
    Ok(crate::oracles::naive_sumset(&f.support()?, &g.support()?).len())
}
