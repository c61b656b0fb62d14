//! Output-sensitive sparse polynomial multiplication.
//!
//! The product of two sparse integer polynomials is computed in time
//! softly linear in the sizes of the inputs, the structural support
//! `supp F + supp G` and the output, rather than in `#F #G`. The pipeline:
//!
//! - [`sumset`] finds `supp F + supp G` from cyclic images of indicator
//!   polynomials, interpolated by [`interp`];
//! - [`sparsemul`] recovers coefficients on a known support with transposed
//!   Vandermonde systems ([`vander`]) over primes from [`numtheory`], first
//!   modulo a prime to prune cancelled terms and then exactly.
//!
//! All randomness is drawn from a seeded [`rng::RandomSource`]; every
//! randomized routine takes a failure probability `mu` and either returns
//! the right answer, returns [`Error::Fail`], or (with probability at most
//! `mu`) a wrong answer. [`oracles`] holds the brute-force references.

pub(crate) mod arith;
pub mod cli;
pub mod config;
pub mod error;
pub mod interp;
pub mod metrics;
pub mod numtheory;
pub mod oracles;
pub mod polycore;
pub mod rng;
pub mod sparsemul;
pub mod sumset;
pub mod vander;

pub use config::{Config, DenseStrategy, Hashing};
pub use error::{Error, FailKind, Result};
pub use polycore::{ExponentSet, SparsePoly, Term};
pub use rng::RandomSource;
pub use sparsemul::{mul_known_support, sparse_mult_ring, sparse_mult_zz, Ring, SupportedPair};
pub use sumset::sumset;
