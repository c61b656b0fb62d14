use thiserror::Error;

/// Which randomized stage gave up.
///
/// Every randomized routine either returns a correct answer with the
/// requested probability, a wrong answer with small probability, or one of
/// these. A caller receiving `Fail` propagates it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailKind {
    /// `get_prime` exhausted its sampling rounds.
    PrimeSampling,
    /// `get_prim_roots` exhausted its outer rounds (possibly `lambda0` too small).
    PrimRoots,
    /// Known-support multiplication could not gather enough CRT moduli, or
    /// the exponent set kept colliding modulo the difference-prime.
    KnownSupport,
    /// The base-case peeling loop hit its round cap.
    Peeling,
    /// The base-case product failed randomized verification.
    Verification,
    /// A sumset slot could not be decoded into an exponent.
    ExponentDecode,
}

impl std::fmt::Display for FailKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FailKind::PrimeSampling => "prime sampling",
            FailKind::PrimRoots => "primitive-root bundle",
            FailKind::KnownSupport => "known-support recovery",
            FailKind::Peeling => "base-case peeling",
            FailKind::Verification => "base-case verification",
            FailKind::ExponentDecode => "exponent decoding",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("FAIL in {0}")]
    Fail(FailKind),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Vandermonde system is not invertible (repeated point)")]
    NotInvertible,
    #[error("moduli are not pairwise coprime")]
    NotCoprime,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_fail(&self) -> bool {
        matches!(self, Error::Fail(_))
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
