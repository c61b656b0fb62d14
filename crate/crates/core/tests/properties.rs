use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use proptest::prelude::*;
use spmul::interp::product_image;
use spmul::numtheory::{centered_rem, crt, get_diff_prime, get_prime, get_vanish_prime, is_prime, nonneg_rem, ResidueSystem};
use spmul::oracles::{naive_mul, naive_sumset, vt_apply_naive};
use spmul::polycore::{dense_mul_cyclic, kronecker_pack, kronecker_unpack, reduce_cyclic, scale_arg_reduce, DenseCyclicPoly};
use spmul::sumset::{estimate_sparsity, sumset};
use spmul::vander::{vt_apply, vt_solve, VandermondePoints};
use spmul::{sparse_mult_ring, sparse_mult_zz, Error, ExponentSet, RandomSource, Ring, SparsePoly, Term};

fn univariate(terms: Vec<(i64, i64)>) -> SparsePoly {
    SparsePoly::univariate(terms)
}

fn small_poly(max_terms: usize, exp: std::ops::Range<i64>, coeff: i64) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((-coeff..=coeff, exp), 0..=max_terms).prop_map(univariate)
}

fn multi_poly(nvars: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((-9i64..=9, prop::collection::vec(-4i64..=4, nvars)), 0..=6).prop_map(move |ts| {
        let terms = ts.into_iter().map(|(c, e)| Term { coeff: c.into(), exps: e.into_iter().map(BigInt::from).collect() });
        let mut map = std::collections::BTreeMap::<Vec<BigInt>, BigInt>::new();
        for t in terms {
            *map.entry(t.exps).or_default() += t.coeff;
        }
        SparsePoly::new(nvars, map.into_iter().map(|(exps, coeff)| Term { coeff, exps })).unwrap()
    })
}

fn set_of(v: Vec<i64>) -> ExponentSet {
    ExponentSet::new(v.into_iter().map(BigInt::from).collect())
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// Accepts `Fail`; anything else must be `Ok`.
fn allow_fail<T>(r: Result<T, Error>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) if e.is_fail() => None,
        Err(e) => panic!("unexpected error {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn remainders_in_range(n in any::<i64>(), m in 1i64..1_000_000) {
        let (nb, mb) = (BigInt::from(n), BigInt::from(m));
        let r = nonneg_rem(&nb, &mb).unwrap();
        prop_assert!(r >= BigInt::zero() && r < mb);
        prop_assert_eq!((&nb - &r) % &mb, BigInt::zero());
        let c = centered_rem(&nb, &mb).unwrap();
        prop_assert!(BigInt::from(2) * &c >= -&mb && BigInt::from(2) * &c < mb);
        prop_assert_eq!((&nb - &c) % &mb, BigInt::zero());
    }

    #[test]
    fn crt_reproduces_residues(rs in prop::collection::vec(any::<u32>(), 1..5)) {
        let moduli = [101u64, 103, 107, 109];
        let pairs: Vec<(BigUint, BigUint)> = rs.iter().zip(moduli).map(|(&r, m)| (big(r as u64 % m), big(m))).collect();
        let v = crt(&ResidueSystem::new(pairs.clone()).unwrap());
        let prod: BigUint = pairs.iter().map(|(_, m)| m.clone()).product();
        prop_assert!(v < prod);
        for (r, m) in &pairs {
            prop_assert_eq!(&v % m, r.clone());
        }
    }

    #[test]
    fn samplers_stay_in_their_intervals(seed in any::<u64>(), lambda in 21.0f64..1e9) {
        let mut rng = RandomSource::from_seed(seed);
        if let Some(p) = allow_fail(get_prime(lambda, 0.1, &mut rng)) {
            prop_assert!(is_prime(&p));
            prop_assert!(p > big(lambda.floor() as u64) && p <= big((2.0 * lambda).floor() as u64));
        }
        let d = big(1 << 40);
        for q in [get_vanish_prime(50, &d, 1.0, 0.1, &mut rng), get_diff_prime(30, &d, 1.0, 0.1, &mut rng)].into_iter().filter_map(allow_fail) {
            prop_assert!(is_prime(&q));
        }
    }

    #[test]
    fn cyclic_reduction_is_an_evaluation_homomorphism(f in small_poly(8, -30..30, 50)) {
        // 7 | 29 - 1, and 16 has multiplicative order 7 mod 29.
        let (p, m) = (7usize, big(29));
        let red = reduce_cyclic(&f, p, &m).unwrap();
        let mut w = BigUint::one();
        for _ in 0..p {
            let lhs = red.coeffs().iter().enumerate().fold(BigUint::zero(), |acc, (i, c)| (acc + c * w.modpow(&big(i as u64), &m)) % &m);
            let winv = w.modpow(&big(6), &m);
            let rhs = f.univariate_terms().fold(BigInt::zero(), |acc, (c, e)| {
                let base = if *e < BigInt::zero() { &winv } else { &w };
                acc + c * BigInt::from(base.modpow(e.magnitude(), &m))
            });
            let rhs = nonneg_rem(&rhs, &BigInt::from(m.clone())).unwrap();
            prop_assert_eq!(BigInt::from(lhs), rhs);
            w = w * 16u32 % &m;
        }
    }

    #[test]
    fn dense_mul_matches_schoolbook(p in 1usize..=16, m in 2u64..=97, seed in any::<u64>()) {
        let mut rng = RandomSource::from_seed(seed);
        let a: Vec<u64> = (0..p).map(|_| rng.below_u64(m)).collect();
        let b: Vec<u64> = (0..p).map(|_| rng.below_u64(m)).collect();
        let mut want = vec![0u64; p];
        for i in 0..p {
            for j in 0..p {
                want[(i + j) % p] = (want[(i + j) % p] + a[i] * b[j]) % m;
            }
        }
        let lift = |v: &[u64]| DenseCyclicPoly::from_coeffs(&big(m), &v.iter().map(|&x| big(x)).collect::<Vec<_>>()).unwrap();
        let got = dense_mul_cyclic(&lift(&a), &lift(&b)).unwrap();
        prop_assert_eq!(got.coeffs(), want.into_iter().map(big).collect::<Vec<_>>());
    }

    #[test]
    fn kronecker_is_a_homomorphism(f in multi_poly(3), g in multi_poly(3)) {
        let d = big(9);
        let h = naive_mul(&f, &g).unwrap();
        let packed = naive_mul(&kronecker_pack(&f, &d).unwrap(), &kronecker_pack(&g, &d).unwrap()).unwrap();
        prop_assert_eq!(&packed, &kronecker_pack(&h, &d).unwrap());
        prop_assert_eq!(kronecker_unpack(&packed, 3, &d).unwrap(), h);
    }

    #[test]
    fn text_round_trips(f in multi_poly(2), s in prop::collection::vec(-1000i64..1000, 0..20)) {
        prop_assert_eq!(SparsePoly::parse(&f.to_text()).unwrap(), f);
        let s = set_of(s);
        prop_assert_eq!(ExponentSet::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn product_image_reduces_naive_product(f in small_poly(8, 0..100, 20), g in small_poly(8, 0..100, 20), alpha in 1u64..101, r in 1usize..20) {
        let q = big(101);
        let want = scale_arg_reduce(&naive_mul(&f, &g).unwrap(), &big(alpha), r, &q).unwrap();
        prop_assert_eq!(product_image(&f, &g, &big(alpha), r, &q).unwrap(), want);
    }

    #[test]
    fn vandermonde_round_trip(seed in any::<u64>(), s in 1usize..80) {
        let mut rng = RandomSource::from_seed(seed);
        let q = big((1u64 << 61) - 1);
        let mut pts: Vec<BigUint> = Vec::new();
        while pts.len() < s {
            let v = rng.below(&q);
            if !pts.contains(&v) {
                pts.push(v);
            }
        }
        let c: Vec<BigUint> = (0..s).map(|_| rng.below(&q)).collect();
        let vp = VandermondePoints::new(q.clone(), pts.clone()).unwrap();
        let a = vt_apply(&vp, &c).unwrap();
        prop_assert_eq!(&a, &vt_apply_naive(&vp, &c).unwrap());
        prop_assert_eq!(vt_solve(&vp, &a).unwrap(), c);
        if s > 1 {
            pts[s - 1] = pts[0].clone();
            let dup = VandermondePoints::new(q, pts).unwrap();
            prop_assert!(matches!(vt_solve(&dup, &a), Err(Error::NotInvertible)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(24) })]

    #[test]
    fn sumset_output_obeys_size_and_range_bounds(a in prop::collection::vec(-(1i64 << 40)..(1i64 << 40), 1..15), b in prop::collection::vec(-500i64..500, 1..15), seed in any::<u64>()) {
        let (a, b) = (set_of(a), set_of(b));
        let mut rng = RandomSource::from_seed(seed);
        if let Some(s) = allow_fail(sumset(&a, &b, 0.01, &mut rng)) {
            let r = (a.len() + b.len()) as usize;
            prop_assert!(s.len() + 1 >= r && s.len() <= a.len() * b.len());
            prop_assert!(*s.min().unwrap() >= a.min().unwrap() + b.min().unwrap());
            prop_assert!(*s.max().unwrap() <= a.max().unwrap() + b.max().unwrap());
            prop_assert_eq!(s, naive_sumset(&a, &b));
        }
    }

    #[test]
    fn size_estimate_is_a_bounded_power_of_two(a in prop::collection::vec(0i64..200, 1..12), b in prop::collection::vec(0i64..200, 1..12), seed in any::<u64>()) {
        let (a, b) = (set_of(a), set_of(b));
        let p = big(809);
        let ind = |s: &ExponentSet| SparsePoly::univariate(s.elems().iter().map(|e| (BigInt::one(), e.clone())));
        let r = (a.len() + b.len()) as u64;
        let mut rng = RandomSource::from_seed(seed);
        if let Some(est) = allow_fail(estimate_sparsity(&ind(&a), &ind(&b), &p, r, 0.1, &mut rng)) {
            prop_assert!(est.is_power_of_two() && est >= 2 && est <= 2 * r * r);
        }
    }

    #[test]
    fn product_sanity(f in small_poly(10, 0..(1 << 40), 1 << 20), g in small_poly(10, 0..(1 << 40), 1 << 20), seed in any::<u64>()) {
        let mut rng = RandomSource::from_seed(seed);
        if let Some(h) = allow_fail(sparse_mult_zz(&f, &g, 0.01, &mut rng)) {
            prop_assert_eq!(&h, &naive_mul(&f, &g).unwrap());
            if !f.is_zero() && !g.is_zero() {
                let poss = naive_sumset(&f.support().unwrap(), &g.support().unwrap());
                prop_assert!(h.exponents().all(|e| poss.contains(e)));
                prop_assert_eq!(h.exponents().max(), poss.max());
                let bound = f.height() * g.height() * big(f.sparsity().min(g.sparsity()) as u64);
                prop_assert!(h.height() <= bound);
            }
        }
    }

    #[test]
    fn ring_products_match_reduced_oracle(f in multi_poly(2), g in multi_poly(2), m in 2u64..50, seed in any::<u64>()) {
        let mut rng = RandomSource::from_seed(seed);
        let m = big(m);
        let mi = BigInt::from(m.clone());
        let want = naive_mul(&f, &g).unwrap().map_coeffs(|c| centered_rem(c, &mi).unwrap());
        if let Some(h) = allow_fail(sparse_mult_ring(&f, &g, &Ring::Modular(m), 0.01, &mut rng)) {
            prop_assert_eq!(h, want);
        }
        if let Some(h) = allow_fail(sparse_mult_ring(&f, &g, &Ring::Integers, 0.01, &mut rng)) {
            prop_assert_eq!(h, naive_mul(&f, &g).unwrap());
        }
    }
}
