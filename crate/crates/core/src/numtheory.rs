//! Prime sampling, primality, modular reduction and Chinese remaindering.
//!
//! Primality is decided by Miller-Rabin: with the first twelve prime bases,
//! which is exact below 2^64, and with the first sixty-four prime bases above
//! that. The residual error for large inputs is far below any failure budget
//! the samplers are called with.

use crate::arith::mont::Mont128;
use crate::arith::{is_prime_u64, ln_big};
use crate::config::{Config, Hashing};
use crate::error::{Error, FailKind, Result};
use crate::metrics;
use crate::rng::RandomSource;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use std::collections::HashSet;

const SMALL_PRIMES: [u32; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307,
    311,
];

pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in SMALL_PRIMES.iter() {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    metrics::count(n.bits() * 4);
    if let Some(small) = n.to_u128().filter(|v| *v < 1 << 127) {
        let m = Mont128::new(small);
        let d_limbs: Vec<u64> = d.iter_u64_digits().collect();
        let one = m.one();
        let minus_one = m.sub(0, one);
        'witness: for &a in SMALL_PRIMES.iter() {
            let mut x = m.pow(m.to_mont(a as u128), &d_limbs);
            if x == one || x == minus_one {
                continue;
            }
            for _ in 1..s {
                x = m.mul(x, x);
                if x == minus_one {
                    continue 'witness;
                }
            }
            return false;
        }
        return true;
    }
    'witness_big: for &a in SMALL_PRIMES.iter() {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'witness_big;
            }
        }
        return false;
    }
    true
}

/// Number of sampling rounds `get_prime` performs for bound `lambda`.
pub fn get_prime_rounds(lambda: f64, mu: f64) -> u64 {
    ((5.0 / 6.0) * lambda.ln() * (1.0 / mu).ln()).ceil().max(1.0) as u64
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("failure probability {mu} not in (0,1)")))
    }
}

/// Random prime from `(lambda, 2 lambda]`.
pub fn get_prime(lambda: f64, mu: f64, rng: &mut RandomSource) -> Result<BigUint> {
    check_mu(mu)?;
    if !(lambda >= 21.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("prime bound {lambda} must be at least 21")));
    }
    let floor = BigUint::from_f64(lambda.floor()).expect("finite bound");
    sample_odd_prime(&floor, get_prime_rounds(lambda, mu), rng)
}

/// `get_prime` with an integer bound.
pub fn get_prime_big(lambda: &BigUint, mu: f64, rng: &mut RandomSource) -> Result<BigUint> {
    check_mu(mu)?;
    if *lambda < BigUint::from(21u32) {
        return Err(Error::invalid("prime bound must be at least 21"));
    }
    let rounds = ((5.0 / 6.0) * ln_big(lambda) * (1.0 / mu).ln()).ceil().max(1.0) as u64;
    sample_odd_prime(lambda, rounds, rng)
}

/// Odd integers in `(lo, 2 lo]`, `rounds` attempts.
fn sample_odd_prime(lo: &BigUint, rounds: u64, rng: &mut RandomSource) -> Result<BigUint> {
    let first = if lo.is_odd() { lo + 2u32 } else { lo + 1u32 };
    let last: BigUint = (lo << 1u32) - 1u32;
    let count = (&last - &first) / 2u32 + 1u32;
    for _ in 0..rounds {
        let cand = &first + rng.below(&count) * 2u32;
        if is_prime(&cand) {
            return Ok(cand);
        }
    }
    Err(Error::Fail(FailKind::PrimeSampling))
}

fn gamma_factor(s: f64, gamma: f64) -> f64 {
    if gamma >= 1.0 {
        s
    } else {
        s.min(1.0 / (1.0 - gamma))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("fraction {gamma} not in (0,1]")))
    }
}

/// The size bound used by `get_vanish_prime`.
pub fn vanish_lambda(s: u64, d: &BigUint, gamma: f64, mu: f64) -> f64 {
    let raw = 10.0 / (3.0 * mu) * gamma_factor(s as f64, gamma) * ln_big(d);
    raw.max(21.0)
}

/// Prime `p` such that, for any set of at most `s` nonzero integers below `d`
/// in absolute value, with probability at least `1 - mu` at least a `gamma`
/// fraction of them are nonzero modulo `p`.
pub fn get_vanish_prime(s: u64, d: &BigUint, gamma: f64, mu: f64, rng: &mut RandomSource) -> Result<BigUint> {
    check_mu(mu)?;
    check_gamma(gamma)?;
    if s == 0 || d.is_zero() {
        return Err(Error::invalid("sparsity and bound must be positive"));
    }
    get_prime(vanish_lambda(s, d, gamma, mu), mu / 2.0, rng)
}

/// The raw size bound used by `get_diff_prime`, before clamping.
pub fn diff_lambda(s: u64, d: &BigUint, gamma: f64, mu: f64) -> f64 {
    if s <= 1 {
        return 0.0;
    }
    10.0 / (3.0 * mu) * (s - 1) as f64 * gamma_factor(s as f64, gamma) * ln_big(d)
}

/// Sampling interval lower end actually used by `get_diff_prime`.
pub fn diff_prime_floor(s: u64, d: &BigUint, gamma: f64, mu: f64) -> BigUint {
    let lambda = diff_lambda(s, d, gamma, mu);
    let twenty_one = BigUint::from(21u32);
    if lambda < 21.0 {
        twenty_one
    } else if d.to_f64().is_some_and(|df| lambda > df) {
        d.max(&twenty_one).clone()
    } else {
        BigUint::from_f64(lambda.floor()).expect("finite bound")
    }
}

/// Prime `p` such that, for any set of at most `s` integers of width below
/// `d`, with probability at least `1 - mu` at least a `gamma` fraction of
/// them are collision-free modulo `p`.
pub fn get_diff_prime(s: u64, d: &BigUint, gamma: f64, mu: f64, rng: &mut RandomSource) -> Result<BigUint> {
    check_mu(mu)?;
    check_gamma(gamma)?;
    if s == 0 || d.is_zero() {
        return Err(Error::invalid("sparsity and bound must be positive"));
    }
    let lambda = diff_lambda(s, d, gamma, mu);
    let floor = diff_prime_floor(s, d, gamma, mu);
    if lambda >= 21.0 && floor.to_f64().is_some_and(|f| f == lambda.floor()) {
        get_prime(lambda, mu / 2.0, rng)
    } else {
        get_prime_big(&floor, mu / 2.0, rng)
    }
}

/// Cyclic length for hashing a set of at most `s` exponents of width below
/// `d`, chosen according to `cfg.hashing`.
pub fn get_hash_prime(
    s: u64,
    d: &BigUint,
    gamma: f64,
    mu: f64,
    cfg: &Config,
    rng: &mut RandomSource,
) -> Result<BigUint> {
    match cfg.hashing {
        Hashing::Rigorous => get_diff_prime(s, d, gamma, mu, rng),
        Hashing::Practical { slack } => {
            check_mu(mu)?;
            let lambda = (slack * s as f64).max(21.0);
            if d.to_f64().is_some_and(|df| lambda > df) {
                let twenty_one = BigUint::from(21u32);
                get_prime_big(d.max(&twenty_one), mu / 2.0, rng)
            } else {
                get_prime(lambda, mu / 2.0, rng)
            }
        }
    }
}

/// A difference-prime `p` with companion primes `q = a p + 1` and elements
/// `omega` of multiplicative order exactly `p` modulo each `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimRootBundle {
    pub p: BigUint,
    pub pairs: Vec<(BigUint, BigUint)>,
}

impl PrimRootBundle {
    pub fn modulus_product(&self) -> BigUint {
        self.pairs.iter().map(|(q, _)| q).product()
    }

    /// Checks every structural invariant, including `prod q >= 2 c`.
    pub fn is_valid_for(&self, c: &BigUint) -> bool {
        if !is_prime(&self.p) {
            return false;
        }
        for (q, w) in &self.pairs {
            if !is_prime(q) || !((q - 1u32) % &self.p).is_zero() {
                return false;
            }
            if w >= q || w.is_one() || !w.modpow(&self.p, q).is_one() {
                return false;
            }
        }
        self.modulus_product() >= c << 1u32
    }
}

/// Parameters derived by `get_prim_roots` before sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimRootPlan {
    pub outer_rounds: u64,
    pub lambda: f64,
    pub candidates: u64,
}

pub fn prim_root_plan(d: &BigUint, t: u64, c: &BigUint, mu: f64, lambda0: f64) -> PrimRootPlan {
    let m = (2.0 / mu).log2().ceil().max(1.0);
    let tt = t as f64;
    let ln_2c = ln_big(&(c << 1u32));
    let lambda = 786f64
        .max(lambda0)
        .max(20.0 / (3.0 * mu) * m * tt * (tt - 1.0) * ln_big(d).max(0.0))
        .max(1.35 * ln_2c.powf(3.13));
    let candidates = (1.1 * ln_2c * lambda.ln().powi(2)).ceil().max(1.0) as u64;
    PrimRootPlan { outer_rounds: m as u64, lambda, candidates }
}

/// Samples a difference-prime for any hidden `t`-subset of `[0, d)` together
/// with enough companion primes to recover integers of absolute value `c`.
pub fn get_prim_roots(d: &BigUint, t: u64, c: &BigUint, mu: f64, cfg: &Config, rng: &mut RandomSource) -> Result<PrimRootBundle> {
    check_mu(mu)?;
    if d.is_zero() || t == 0 || c.is_zero() {
        return Err(Error::invalid("degree, sparsity and height bounds must be positive"));
    }
    let plan = prim_root_plan(d, t, c, mu, cfg.lambda0);
    let target: BigUint = c << 1u32;
    // Even integers in [2, 2 lambda^0.89].
    let top = BigUint::from_f64((2.0 * plan.lambda.powf(0.89)).floor()).expect("finite");
    let evens: BigUint = &top / 2u32;
    let a = match evens.to_u64() {
        Some(e) => plan.candidates.min(e),
        None => plan.candidates,
    };
    for _ in 0..plan.outer_rounds {
        let p = get_prime(plan.lambda, mu / (4.0 * plan.outer_rounds as f64), rng)?;
        let mut seen: HashSet<BigUint> = HashSet::new();
        let mut pairs = Vec::new();
        let mut product = BigUint::one();
        while (seen.len() as u64) < a {
            let alpha = (rng.below(&evens) + 1u32) * 2u32;
            if !seen.insert(alpha.clone()) {
                continue;
            }
            let q = &alpha * &p + 1u32;
            if !is_prime(&q) {
                continue;
            }
            let zeta = rng.below(&(&q - 1u32)) + 1u32;
            let omega = zeta.modpow(&alpha, &q);
            metrics::count(q.bits() * alpha.bits());
            if omega.is_one() {
                continue;
            }
            product *= &q;
            pairs.push((q, omega));
            if product >= target {
                return Ok(PrimRootBundle { p, pairs });
            }
        }
    }
    Err(Error::Fail(FailKind::PrimRoots))
}

/// Congruences with pairwise coprime moduli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSystem {
    pairs: Vec<(BigUint, BigUint)>,
}

impl ResidueSystem {
    /// Residues are reduced into `[0, m)`. Fails if a modulus is zero or two
    /// moduli share a factor.
    pub fn new(pairs: Vec<(BigUint, BigUint)>) -> Result<Self> {
        let mut out = Vec::with_capacity(pairs.len());
        for (r, m) in pairs {
            if m.is_zero() {
                return Err(Error::invalid("modulus must be positive"));
            }
            out.push((r % &m, m));
        }
        for i in 0..out.len() {
            for j in 0..i {
                if !out[i].1.gcd(&out[j].1).is_one() {
                    return Err(Error::NotCoprime);
                }
            }
        }
        Ok(ResidueSystem { pairs: out })
    }

    pub fn pairs(&self) -> &[(BigUint, BigUint)] {
        &self.pairs
    }
}

/// The unique `v` in `[0, prod m)` with `v = r_i (mod m_i)` for every pair.
pub fn crt(rs: &ResidueSystem) -> BigUint {
    let basis = CrtBasis::new(rs.pairs.iter().map(|(_, m)| m.clone()).collect()).expect("checked at construction");
    let residues: Vec<BigUint> = rs.pairs.iter().map(|(r, _)| r.clone()).collect();
    basis.lift(&residues)
}

/// Precomputed data for repeated Chinese remaindering with fixed moduli.
#[derive(Debug, Clone)]
pub struct CrtBasis {
    moduli: Vec<BigUint>,
    /// `inv[i] = (m_0 ... m_{i-1})^{-1} mod m_i`.
    inv: Vec<BigUint>,
    prefix: Vec<BigUint>,
    product: BigUint,
}

impl CrtBasis {
    pub fn new(moduli: Vec<BigUint>) -> Result<Self> {
        let mut inv = Vec::with_capacity(moduli.len());
        let mut prefix = Vec::with_capacity(moduli.len());
        let mut acc = BigUint::one();
        for m in &moduli {
            if m.is_zero() {
                return Err(Error::invalid("modulus must be positive"));
            }
            let a = BigInt::from(&acc % m);
            let e = a.extended_gcd(&BigInt::from(m.clone()));
            if !e.gcd.is_one() {
                return Err(Error::NotCoprime);
            }
            inv.push(crate::arith::rem_euclid_big(&e.x, m));
            prefix.push(acc.clone());
            acc *= m;
        }
        Ok(CrtBasis { moduli, inv, prefix, product: acc })
    }

    pub fn product(&self) -> &BigUint {
        &self.product
    }

    /// Value in `[0, prod m)`.
    pub fn lift(&self, residues: &[BigUint]) -> BigUint {
        assert_eq!(residues.len(), self.moduli.len());
        let mut x = BigUint::zero();
        for i in 0..self.moduli.len() {
            let m = &self.moduli[i];
            let r = &residues[i] % m;
            let xm = &x % m;
            let diff = if r >= xm { r - xm } else { r + m - xm };
            let t = diff * &self.inv[i] % m;
            x += &self.prefix[i] * t;
            let w = self.product.bits().div_ceil(64);
            metrics::count(w * w + 1);
        }
        x
    }

    /// Centered value in `[-P/2, P/2)` for `P = prod m`.
    pub fn lift_centered(&self, residues: &[BigUint]) -> BigInt {
        centered_from_nonneg(self.lift(residues), &self.product)
    }
}

pub(crate) fn centered_from_nonneg(r: BigUint, m: &BigUint) -> BigInt {
    if (&r << 1u32) >= *m {
        BigInt::from(r) - BigInt::from(m.clone())
    } else {
        BigInt::from(r)
    }
}

fn positive_modulus(m: &BigInt) -> Result<BigUint> {
    if m.sign() != Sign::Plus {
        return Err(Error::invalid("modulus must be positive"));
    }
    Ok(m.magnitude().clone())
}

/// `n mod m` in `[0, m)`.
pub fn nonneg_rem(n: &BigInt, m: &BigInt) -> Result<BigInt> {
    let mu = positive_modulus(m)?;
    Ok(BigInt::from(crate::arith::rem_euclid_big(n, &mu)))
}

/// `n mod m` in `[-m/2, m/2)`.
pub fn centered_rem(n: &BigInt, m: &BigInt) -> Result<BigInt> {
    let mu = positive_modulus(m)?;
    Ok(centered_from_nonneg(crate::arith::rem_euclid_big(n, &mu), &mu))
}

/// `centered_rem` for an unsigned modulus; panics on zero.
pub(crate) fn centered(n: &BigInt, m: &BigUint) -> BigInt {
    centered_from_nonneg(crate::arith::rem_euclid_big(n, m), m)
}

/// Smallest prime `>= n`.
pub fn next_prime(n: &BigUint) -> BigUint {
    let mut c = n.clone().max(BigUint::from(2u32));
    if c > BigUint::from(2u32) && c.is_even() {
        c += 1u32;
    }
    while !is_prime(&c) {
        c += if c == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    c
}
