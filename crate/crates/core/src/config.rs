//! Tunables shared by the randomized pipelines.

/// How the cyclic lengths used for hashing exponents are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hashing {
    /// Difference-primes with the worst-case size bound (grows with
    /// `ln D / mu` per term).
    Rigorous,
    /// Random primes from `(slack * S, 2 * slack * S]`, capped at the degree
    /// bound. Collisions are rare for inputs whose exponent differences do not
    /// share many primes of that size; peeling and verification catch the rest.
    Practical { slack: f64 },
}

/// How dense cyclic products are evaluated. Both compute the same result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseStrategy {
    /// Schoolbook below 64 slots, number-theoretic transform above.
    Dense,
    /// Like `Dense`, but multiplies the nonzero entries directly when that is
    /// cheaper than a transform of the full length.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Lower bound on the prime size in `get_prim_roots`. The absolute
    /// constant of the arithmetic-progression estimate is unknown; callers
    /// retry with a doubled value on failure.
    pub lambda0: f64,
    pub hashing: Hashing,
    pub dense: DenseStrategy,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            lambda0: 1.0,
            hashing: Hashing::Practical { slack: 2.0 },
            dense: DenseStrategy::Auto,
        }
    }
}

impl Config {
    /// Dense transforms only, the cost model the complexity bounds assume.
    pub fn dense_only() -> Self {
        Config {
            dense: DenseStrategy::Dense,
            ..Config::default()
        }
    }

    /// Worst-case difference-prime sizes and dense transforms throughout.
    /// Only practical for small degrees and sparsities.
    pub fn rigorous() -> Self {
        Config {
            lambda0: 1.0,
            hashing: Hashing::Rigorous,
            dense: DenseStrategy::Dense,
        }
    }

    /// Reads `SPMUL_LAMBDA0` when set.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Some(v) = std::env::var("SPMUL_LAMBDA0").ok().and_then(|s| s.trim().parse::<f64>().ok()) {
            if v.is_finite() && v > 0.0 {
                cfg.lambda0 = v;
            }
        }
        cfg
    }
}
