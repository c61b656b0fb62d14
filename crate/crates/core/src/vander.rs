//! Transposed Vandermonde maps over prime fields.
//!
//! `vt_apply` sends `c` to `(sum_j c_j v_j^i)` for `i < S`, which is the same
//! as evaluating the sparse polynomial `sum_j c_j x^(e_j)` at `1, w, ..., w^(S-1)`
//! when `v_j = w^(e_j)`. `vt_solve` inverts it.
//!
//! Above a small size the fast path works with the master polynomial
//! `M = prod (z - v_j)`: applying is a rational-function sum followed by one
//! power-series division; solving is one truncated product followed by
//! multipoint evaluation on a remainder tree.

use crate::arith::field::{Fp128, FpBig, PrimeField};
use crate::error::{Error, Result};
use num_bigint::BigUint;

/// Sizes at or below this use the quadratic algorithms.
pub const FAST_THRESHOLD: usize = 1024;
const LEAF_EVAL: usize = 16;

/// Evaluation points `v_1..v_S` modulo a prime `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VandermondePoints {
    q: BigUint,
    points: Vec<BigUint>,
}

impl VandermondePoints {
    /// Points are reduced modulo `q`. The caller vouches that `q` is prime.
    pub fn new(q: BigUint, points: Vec<BigUint>) -> Result<Self> {
        if q < BigUint::from(2u32) {
            return Err(Error::invalid("modulus must be a prime"));
        }
        let points = points.into_iter().map(|v| v % &q).collect();
        Ok(VandermondePoints { q, points })
    }

    pub fn modulus(&self) -> &BigUint {
        &self.q
    }

    pub fn points(&self) -> &[BigUint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether the points are pairwise distinct, i.e. the map is invertible.
    pub fn is_invertible(&self) -> bool {
        distinct(&self.points)
    }
}

fn distinct(points: &[BigUint]) -> bool {
    let mut v: Vec<&BigUint> = points.iter().collect();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

#[derive(Clone, Copy)]
enum Algo {
    Auto,
    Quadratic,
}

pub(crate) fn with_field<R>(q: &BigUint, small: impl FnOnce(&Fp128) -> R, big: impl FnOnce(&FpBig) -> R) -> R {
    match Fp128::new(q) {
        Some(f) => small(&f),
        None => big(&FpBig::new(q)),
    }
}

fn run_apply<F: PrimeField>(f: &F, pts: &VandermondePoints, c: &[BigUint], algo: Algo) -> Vec<BigUint> {
    let v: Vec<F::E> = pts.points.iter().map(|x| f.from_big(x)).collect();
    let ce: Vec<F::E> = c.iter().map(|x| f.from_big(x)).collect();
    let out = match algo {
        Algo::Auto => Plan::new(f, v).apply(&ce),
        Algo::Quadratic => apply_quadratic(f, &v, &ce),
    };
    out.iter().map(|x| f.to_big(x)).collect()
}

fn run_solve<F: PrimeField>(f: &F, pts: &VandermondePoints, a: &[BigUint], algo: Algo) -> Result<Vec<BigUint>> {
    let v: Vec<F::E> = pts.points.iter().map(|x| f.from_big(x)).collect();
    let ae: Vec<F::E> = a.iter().map(|x| f.from_big(x)).collect();
    let out = match algo {
        Algo::Auto => Plan::new(f, v).solve(&ae)?,
        Algo::Quadratic => solve_quadratic(f, &v, &ae)?,
    };
    Ok(out.iter().map(|x| f.to_big(x)).collect())
}

fn check_len(pts: &VandermondePoints, v: &[BigUint]) -> Result<()> {
    if pts.len() == v.len() {
        Ok(())
    } else {
        Err(Error::invalid(format!("expected {} entries, found {}", pts.len(), v.len())))
    }
}

/// `out[i] = sum_j c[j] * v_j^i mod q` for `i < S`.
pub fn vt_apply(pts: &VandermondePoints, c: &[BigUint]) -> Result<Vec<BigUint>> {
    check_len(pts, c)?;
    Ok(with_field(&pts.q, |f| run_apply(f, pts, c, Algo::Auto), |f| run_apply(f, pts, c, Algo::Auto)))
}

/// The `c` with `vt_apply(pts, c) = a`. Fails with `NotInvertible` when two
/// points coincide.
pub fn vt_solve(pts: &VandermondePoints, a: &[BigUint]) -> Result<Vec<BigUint>> {
    check_len(pts, a)?;
    if !pts.is_invertible() {
        return Err(Error::NotInvertible);
    }
    with_field(&pts.q, |f| run_solve(f, pts, a, Algo::Auto), |f| run_solve(f, pts, a, Algo::Auto))
}

/// `vt_apply` by the direct `O(S^2)` double loop.
pub fn vt_apply_quadratic(pts: &VandermondePoints, c: &[BigUint]) -> Result<Vec<BigUint>> {
    check_len(pts, c)?;
    Ok(with_field(&pts.q, |f| run_apply(f, pts, c, Algo::Quadratic), |f| run_apply(f, pts, c, Algo::Quadratic)))
}

/// `vt_solve` by `O(S^2)` classical interpolation.
pub fn vt_solve_quadratic(pts: &VandermondePoints, a: &[BigUint]) -> Result<Vec<BigUint>> {
    check_len(pts, a)?;
    if !pts.is_invertible() {
        return Err(Error::NotInvertible);
    }
    with_field(&pts.q, |f| run_solve(f, pts, a, Algo::Quadratic), |f| run_solve(f, pts, a, Algo::Quadratic))
}

pub(crate) fn apply_quadratic<F: PrimeField>(f: &F, v: &[F::E], c: &[F::E]) -> Vec<F::E> {
    let mut pw: Vec<F::E> = c.to_vec();
    let mut out = Vec::with_capacity(v.len());
    for _ in 0..v.len() {
        let mut acc = f.zero();
        for (p, x) in pw.iter_mut().zip(v) {
            acc = f.add(&acc, p);
            *p = f.mul(p, x);
        }
        out.push(acc);
    }
    out
}

/// `prod (z - v_j)`, low coefficient first, by repeated linear factors.
fn master_quadratic<F: PrimeField>(f: &F, v: &[F::E]) -> Vec<F::E> {
    let mut m = vec![f.one()];
    for x in v {
        let mut next = vec![f.zero(); m.len() + 1];
        for (i, c) in m.iter().enumerate() {
            next[i + 1] = f.add(&next[i + 1], c);
            next[i] = f.sub(&next[i], &f.mul(c, x));
        }
        m = next;
    }
    m
}

fn derivative<F: PrimeField>(f: &F, m: &[F::E]) -> Vec<F::E> {
    m.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &f.from_u64(i as u64))).collect()
}

fn horner<F: PrimeField>(f: &F, poly: &[F::E], x: &F::E) -> F::E {
    let mut acc = f.zero();
    for c in poly.iter().rev() {
        acc = f.add(&f.mul(&acc, x), c);
    }
    acc
}

/// `Ntilde = rev_{S-1}((A * rev_S(M)) mod z^S)`.
fn numerator_from_sums<F: PrimeField>(f: &F, m: &[F::E], a: &[F::E], fast: bool) -> Vec<F::E> {
    let s = a.len();
    let p: Vec<F::E> = m.iter().rev().cloned().collect();
    let mut n = if fast {
        let mut prod = f.poly_mul(a, &p[..s.min(p.len())]);
        prod.truncate(s);
        prod
    } else {
        let mut out = vec![f.zero(); s];
        for i in 0..s {
            for j in 0..=i.min(p.len() - 1) {
                out[i] = f.add(&out[i], &f.mul(&a[i - j], &p[j]));
            }
        }
        out
    };
    n.resize(s, f.zero());
    n.reverse();
    n
}

fn finish_solve<F: PrimeField>(f: &F, num: &[F::E], dm: &[F::E]) -> Result<Vec<F::E>> {
    num.iter()
        .zip(dm)
        .map(|(n, d)| f.inv(d).map(|di| f.mul(n, &di)).ok_or(Error::NotInvertible))
        .collect()
}

pub(crate) fn solve_quadratic<F: PrimeField>(f: &F, v: &[F::E], a: &[F::E]) -> Result<Vec<F::E>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    let m = master_quadratic(f, v);
    let ntilde = numerator_from_sums(f, &m, a, false);
    let dm = derivative(f, &m);
    let nv: Vec<F::E> = v.iter().map(|x| horner(f, &ntilde, x)).collect();
    let dv: Vec<F::E> = v.iter().map(|x| horner(f, &dm, x)).collect();
    finish_solve(f, &nv, &dv)
}

/// Inverse of the power series `g` modulo `z^n`; `g[0]` must be invertible.
fn series_inverse<F: PrimeField>(f: &F, g: &[F::E], n: usize) -> Vec<F::E> {
    let mut inv = vec![f.inv(&g[0]).expect("unit constant term")];
    let mut k = 1;
    while k < n {
        let k2 = (2 * k).min(n);
        let mut e = f.poly_mul(&g[..k2.min(g.len())], &inv);
        e.truncate(k2);
        e.resize(k2, f.zero());
        for x in e.iter_mut() {
            *x = f.neg(x);
        }
        e[0] = f.add(&e[0], &f.from_u64(2));
        let mut next = f.poly_mul(&inv, &e);
        next.truncate(k2);
        inv = next;
        k = k2;
    }
    inv.resize(n, f.zero());
    inv
}

/// Remainder of `a` modulo the monic `b`; `binv` is the inverse of
/// `rev(b)` to at least `deg a - deg b + 1` terms.
fn rem_monic<F: PrimeField>(f: &F, a: &[F::E], b: &[F::E], binv: &[F::E]) -> Vec<F::E> {
    let d = b.len() - 1;
    if a.len() <= d {
        return a.to_vec();
    }
    let qlen = a.len() - d;
    let arev: Vec<F::E> = a.iter().rev().take(qlen).cloned().collect();
    let mut qrev = f.poly_mul(&arev, &binv[..qlen]);
    qrev.truncate(qlen);
    qrev.resize(qlen, f.zero());
    qrev.reverse();
    let qb = f.poly_mul(&qrev, b);
    (0..d).map(|i| f.sub(&a[i], &qb[i])).collect()
}

/// Subproduct tree over the points; `levels[0]` holds the linear factors.
struct ProductTree<E> {
    levels: Vec<Vec<Vec<E>>>,
}

impl<E: Clone> ProductTree<E> {
    fn build<F: PrimeField<E = E>>(f: &F, v: &[E]) -> Self {
        let leaves: Vec<Vec<E>> = v.iter().map(|x| vec![f.neg(x), f.one()]).collect();
        let mut levels = vec![leaves];
        while levels.last().unwrap().len() > 1 {
            let prev = levels.last().unwrap();
            let next: Vec<Vec<E>> = prev
                .chunks(2)
                .map(|pair| if pair.len() == 2 { f.poly_mul(&pair[0], &pair[1]) } else { pair[0].clone() })
                .collect();
            levels.push(next);
        }
        ProductTree { levels }
    }

    fn root(&self) -> &[E] {
        &self.levels.last().unwrap()[0]
    }

    /// Number of points under node `(level, idx)`.
    fn span(&self, level: usize, idx: usize, total: usize) -> (usize, usize) {
        let size = 1usize << level;
        let lo = idx * size;
        (lo, (lo + size).min(total))
    }
}

/// Precomputed structure for repeated transforms with fixed points.
pub(crate) struct Plan<'f, F: PrimeField> {
    f: &'f F,
    v: Vec<F::E>,
    tree: Option<ProductTree<F::E>>,
    rev_inv: Option<Vec<F::E>>,
}

impl<'f, F: PrimeField> Plan<'f, F> {
    pub fn new(f: &'f F, v: Vec<F::E>) -> Self {
        Plan { f, v, tree: None, rev_inv: None }
    }

    fn fast(&self) -> bool {
        self.v.len() > FAST_THRESHOLD
    }

    fn tree(&mut self) -> &ProductTree<F::E> {
        if self.tree.is_none() {
            self.tree = Some(ProductTree::build(self.f, &self.v));
        }
        self.tree.as_ref().unwrap()
    }

    pub fn apply(&mut self, c: &[F::E]) -> Vec<F::E> {
        let f = self.f;
        let s = self.v.len();
        if !self.fast() {
            return apply_quadratic(f, &self.v, c);
        }
        let tree = self.tree();
        // Combine (Ntilde, M) pairs up the tree: Ntilde = Nl*Mr + Nr*Ml.
        let mut nums: Vec<Vec<F::E>> = c.iter().map(|x| vec![x.clone()]).collect();
        for level in 0..tree.levels.len() - 1 {
            let ms = &tree.levels[level];
            let mut next = Vec::with_capacity(nums.len().div_ceil(2));
            for (i, pair) in nums.chunks(2).enumerate() {
                if pair.len() == 1 {
                    next.push(pair[0].clone());
                    continue;
                }
                let a = f.poly_mul(&pair[0], &ms[2 * i + 1]);
                let b = f.poly_mul(&pair[1], &ms[2 * i]);
                let len = a.len().max(b.len());
                let sum: Vec<F::E> = (0..len)
                    .map(|k| match (a.get(k), b.get(k)) {
                        (Some(x), Some(y)) => f.add(x, y),
                        (Some(x), None) | (None, Some(x)) => x.clone(),
                        (None, None) => unreachable!(),
                    })
                    .collect();
                next.push(sum);
            }
            nums = next;
        }
        let mut ntilde = nums.pop().unwrap();
        ntilde.resize(s, f.zero());
        let n: Vec<F::E> = ntilde.into_iter().rev().collect();
        if self.rev_inv.is_none() {
            let p: Vec<F::E> = self.tree().root().iter().rev().cloned().collect();
            self.rev_inv = Some(series_inverse(f, &p, s));
        }
        let mut out = f.poly_mul(&n, self.rev_inv.as_ref().unwrap());
        out.truncate(s);
        out.resize(s, f.zero());
        out
    }

    pub fn solve(&mut self, a: &[F::E]) -> Result<Vec<F::E>> {
        let f = self.f;
        if !self.fast() {
            return solve_quadratic(f, &self.v, a);
        }
        let s = self.v.len();
        let tree = self.tree();
        let m = tree.root().to_vec();
        let ntilde = numerator_from_sums(f, &m, a, true);
        let dm = derivative(f, &m);
        let (nv, dv) = self.eval_both(&ntilde, &dm);
        debug_assert_eq!(nv.len(), s);
        finish_solve(f, &nv, &dv)
    }

    /// Values of two polynomials of degree below `S` at every point.
    fn eval_both(&self, p1: &[F::E], p2: &[F::E]) -> (Vec<F::E>, Vec<F::E>) {
        let f = self.f;
        let tree = self.tree.as_ref().unwrap();
        let s = self.v.len();
        let mut out1 = vec![f.zero(); s];
        let mut out2 = vec![f.zero(); s];
        let top = tree.levels.len() - 1;
        let mut stack = vec![(top, 0usize, p1.to_vec(), p2.to_vec())];
        while let Some((level, idx, r1, r2)) = stack.pop() {
            let (lo, hi) = tree.span(level, idx, s);
            if hi - lo <= LEAF_EVAL || level == 0 {
                for j in lo..hi {
                    out1[j] = horner(f, &r1, &self.v[j]);
                    out2[j] = horner(f, &r2, &self.v[j]);
                }
                continue;
            }
            for child in [2 * idx, 2 * idx + 1] {
                let Some(node) = tree.levels[level - 1].get(child) else { continue };
                let need = r1.len().max(r2.len()).saturating_sub(node.len() - 1);
                let (c1, c2) = if need == 0 {
                    (r1.clone(), r2.clone())
                } else {
                    let rev: Vec<F::E> = node.iter().rev().cloned().collect();
                    let inv = series_inverse(f, &rev, need);
                    (rem_monic(f, &r1, node, &inv), rem_monic(f, &r2, node, &inv))
                };
                stack.push((level - 1, child, c1, c2));
            }
        }
        (out1, out2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn pts(q: u64, v: &[u64]) -> VandermondePoints {
        VandermondePoints::new(big(q), v.iter().map(|x| big(*x)).collect()).unwrap()
    }

    fn vals(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|x| big(*x)).collect()
    }

    #[test]
    fn examples() {
        let p = pts(7, &[1, 3]);
        assert_eq!(vt_apply(&p, &vals(&[1, 1])).unwrap(), vals(&[2, 4]));
        assert_eq!(vt_solve(&p, &vals(&[2, 4])).unwrap(), vals(&[1, 1]));
        assert_eq!(vt_apply(&pts(7, &[5]), &vals(&[3])).unwrap(), vals(&[3]));
        assert_eq!(vt_apply(&pts(7, &[1, 2, 3]), &vals(&[0, 0, 0])).unwrap(), vals(&[0, 0, 0]));
        assert!(matches!(vt_solve(&pts(7, &[2, 2]), &vals(&[1, 1])), Err(Error::NotInvertible)));
        assert!(vt_apply(&p, &vals(&[1])).is_err());
    }

    #[test]
    fn fast_and_quadratic_agree() {
        let mut rng = RandomSource::from_seed(11);
        let q: BigUint = BigUint::from((1u64 << 61) - 1);
        for s in [1025usize, 1100] {
            let mut v: Vec<BigUint> = (0..s).map(|_| rng.below(&q)).collect();
            v[0] = BigUint::default();
            let p = VandermondePoints::new(q.clone(), v).unwrap();
            let c: Vec<BigUint> = (0..s).map(|_| rng.below(&q)).collect();
            let a = vt_apply(&p, &c).unwrap();
            assert_eq!(a, vt_apply_quadratic(&p, &c).unwrap());
            assert_eq!(vt_solve(&p, &a).unwrap(), c);
            assert_eq!(vt_solve_quadratic(&p, &a).unwrap(), c);
        }
    }

    #[test]
    fn big_modulus_round_trip() {
        let mut rng = RandomSource::from_seed(3);
        let q: BigUint = (BigUint::from(1u32) << 521u32) - 1u32;
        let s = 40;
        let v: Vec<BigUint> = (0..s).map(|_| rng.below(&q)).collect();
        let p = VandermondePoints::new(q.clone(), v).unwrap();
        let c: Vec<BigUint> = (0..s).map(|_| rng.below(&q)).collect();
        let a = vt_apply(&p, &c).unwrap();
        assert_eq!(a, vt_apply_quadratic(&p, &c).unwrap());
        assert_eq!(vt_solve(&p, &a).unwrap(), c);
    }
}
