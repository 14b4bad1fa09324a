use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the supported bound {bound}")]
    FieldTooLarge { p: u32, m: u32, bound: u64 },
    #[error("frobenius exponent {s} out of range 0..{m}")]
    FrobeniusRange { s: u32, m: u32 },
    #[error("{0} is not the order of a subfield of GF({1})")]
    NotSubfield(u64, u64),
    #[error("invalid column subset: {0}")]
    BadSubset(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid projective point: {0}")]
    BadPoint(String),
    #[error("invalid subline frame: {0}")]
    BadFrame(String),
    #[error("invalid automorphism vector: {0}")]
    BadSigma(String),
    #[error("norm |sigma| = {norm} violates the assumption |sigma| < q^t = {order}")]
    NormTooLarge { norm: u64, order: u64 },
    #[error("size bound exceeded: {0}")]
    TooLarge(String),
    #[error("parity-check matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("minimum distance is not resolved to d+2 (delta = {delta:?}, d+2 = {target})")]
    NotMinimumD2 { delta: Option<usize>, target: usize },
    #[error("minimum distance unresolved; only a lower bound of {0} is known")]
    Unresolved(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
