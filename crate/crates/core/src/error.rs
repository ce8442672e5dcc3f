use thiserror::Error;

use crate::Int;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undefined root count: zero polynomial")]
    ZeroPolynomial,
    #[error("invalid algebraic number: {0}")]
    InvalidAlgebraic(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not projectively faithful")]
    NotProjectivelyFaithful,
    #[error("zero end coefficient")]
    ZeroEndCoefficient,
    #[error("negative coefficient: {0}")]
    NegativeCoefficient(String),
    #[error("factorization incomplete: {0} has no prime factor below 10^6 and could not be proven prime")]
    FactorizationIncomplete(Int),
    #[error("size envelope exceeded: {0}")]
    SizeEnvelope(String),
    #[error("Log h ⊄ Log-hull^k: exponent {0:?} is not in the {1}-fold sumset")]
    SupportViolation(Vec<i64>, u32),
    #[error("basis mismatch")]
    BasisMismatch,
    #[error("not a vertex: {0:?}")]
    NotAVertex(Vec<i64>),
    #[error("a not affine on J")]
    NotAffine,
    #[error("inadmissible input: {0}")]
    Inadmissible(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
