//! Brute-force reference implementations.

use crate::error::{Error, Result};
use crate::metrics;
use crate::polycore::{ExponentSet, SparsePoly};
use crate::vander::VandermondePoints;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

fn limbs(x: &BigInt) -> u64 {
    x.bits().div_ceil(64).max(1)
}

/// Exact product by the double loop; any number of variables, Laurent
/// exponents allowed.
pub fn naive_mul(f: &SparsePoly, g: &SparsePoly) -> Result<SparsePoly> {
    if f.nvars() != g.nvars() {
        return Err(Error::invalid("variable counts differ"));
    }
    let mut acc: HashMap<Vec<BigInt>, BigInt> = HashMap::with_capacity(f.sparsity() * 2);
    let mut ops = 0u64;
    for a in f.terms() {
        let la = limbs(&a.coeff);
        for b in g.terms() {
            let e: Vec<BigInt> = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
            *acc.entry(e).or_default() += &a.coeff * &b.coeff;
            ops += la * limbs(&b.coeff) + f.nvars() as u64 + 1;
        }
    }
    metrics::count(ops);
    Ok(SparsePoly::from_map(f.nvars(), acc.into_iter().collect::<BTreeMap<_, _>>()))
}

/// `{a + b : a in A, b in B}` by the double loop.
pub fn naive_sumset(a: &ExponentSet, b: &ExponentSet) -> ExponentSet {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.elems() {
        for y in b.elems() {
            out.push(x + y);
        }
    }
    metrics::count((a.len() * b.len()) as u64);
    ExponentSet::new(out)
}

/// `out[i] = sum_j c[j] v_j^i mod q` by the matrix-vector product.
pub fn vt_apply_naive(pts: &VandermondePoints, c: &[BigUint]) -> Result<Vec<BigUint>> {
    if c.len() != pts.len() {
        return Err(Error::invalid("length mismatch"));
    }
    let q = pts.modulus();
    let s = pts.len();
    let mut out = Vec::with_capacity(s);
    for i in 0..s {
        let e = BigUint::from(i);
        let mut acc = BigUint::zero();
        for (cj, v) in c.iter().zip(pts.points()) {
            acc += cj * v.modpow(&e, q);
        }
        out.push(acc % q);
    }
    Ok(out)
}

/// Solves the transposed Vandermonde system by Gaussian elimination.
pub fn vt_solve_naive(pts: &VandermondePoints, a: &[BigUint]) -> Result<Vec<BigUint>> {
    let s = pts.len();
    if a.len() != s {
        return Err(Error::invalid("length mismatch"));
    }
    let q = pts.modulus();
    // Row i: [v_1^i ... v_S^i | a_i].
    let mut rows: Vec<Vec<BigUint>> = (0..s)
        .map(|i| {
            let e = BigUint::from(i);
            let mut r: Vec<BigUint> = pts.points().iter().map(|v| v.modpow(&e, q)).collect();
            r.push(&a[i] % q);
            r
        })
        .collect();
    let qm2 = q - 2u32;
    for col in 0..s {
        let piv = (col..s).find(|&r| !rows[r][col].is_zero()).ok_or(Error::NotInvertible)?;
        rows.swap(col, piv);
        let inv = rows[col][col].modpow(&qm2, q);
        for x in rows[col].iter_mut() {
            *x = &*x * &inv % q;
        }
        for r in 0..s {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for k in col..=s {
                let sub = &factor * &rows[col][k] % q;
                rows[r][k] = (&rows[r][k] + q - sub) % q;
            }
        }
    }
    debug_assert!(rows.iter().enumerate().all(|(i, r)| r[i].is_one()));
    Ok(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::Term;

    fn set(v: &[i64]) -> ExponentSet {
        ExponentSet::new(v.iter().map(|x| BigInt::from(*x)).collect())
    }

    #[test]
    fn mul_examples() {
        let f = SparsePoly::univariate([(1, 0), (1, 1)]);
        let g = SparsePoly::univariate([(1, 0), (-1, 1)]);
        assert_eq!(naive_mul(&f, &g).unwrap(), SparsePoly::univariate([(1, 0), (-1, 2)]));
        assert_eq!(naive_mul(&f, &SparsePoly::univariate([(1, 0)])).unwrap(), f);
        let t = |c: i64, a: i64, b: i64| Term { coeff: c.into(), exps: vec![a.into(), b.into()] };
        let x_plus_y = SparsePoly::new(2, [t(1, 1, 0), t(1, 0, 1)]).unwrap();
        let x_minus_y = SparsePoly::new(2, [t(1, 1, 0), t(-1, 0, 1)]).unwrap();
        let want = SparsePoly::new(2, [t(1, 2, 0), t(-1, 0, 2)]).unwrap();
        assert_eq!(naive_mul(&x_plus_y, &x_minus_y).unwrap(), want);
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(naive_sumset(&set(&[0]), &set(&[0])), set(&[0]));
        assert_eq!(naive_sumset(&set(&[0, 1, 3]), &set(&[0, 2])), set(&[0, 1, 2, 3, 5]));
        let n = 9;
        let prog: Vec<i64> = (0..n).collect();
        assert_eq!(naive_sumset(&set(&prog), &set(&prog)).len(), (2 * n - 1) as usize);
    }

    #[test]
    fn vandermonde_examples() {
        let b = |v: &[u64]| v.iter().map(|x| BigUint::from(*x)).collect::<Vec<_>>();
        let p = VandermondePoints::new(BigUint::from(7u32), b(&[1, 3])).unwrap();
        assert_eq!(vt_apply_naive(&p, &b(&[1, 1])).unwrap(), b(&[2, 4]));
        assert_eq!(vt_solve_naive(&p, &b(&[2, 4])).unwrap(), b(&[1, 1]));
        let single = VandermondePoints::new(BigUint::from(7u32), b(&[4])).unwrap();
        assert_eq!(vt_apply_naive(&single, &b(&[6])).unwrap(), b(&[6]));
        let bad = VandermondePoints::new(BigUint::from(7u32), b(&[2, 2])).unwrap();
        assert!(matches!(vt_solve_naive(&bad, &b(&[1, 1])), Err(Error::NotInvertible)));
    }
}
