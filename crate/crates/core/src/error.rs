use thiserror::Error;

use crate::Rational;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse {input:?} as a rational: {reason}")]
    Parse { input: String, reason: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("zero has no canonical expansion (its valuation is +inf)")]
    ZeroExpansion,
    #[error("digit count must be positive")]
    EmptyExpansion,
    #[error("zero is not an idele component")]
    ZeroIdele,
    #[error("factorization exceeded bound: cofactor {0} is composite or too large")]
    FactorizationBound(String),
    #[error("det ≠ 1: ad - bc = {det} for ({map})")]
    Determinant { map: String, det: String },
    #[error("c = 0: ({map}) is affine, not in the c ≠ 0 class")]
    CZero { map: String },
    #[error("composition leaves the c ≠ 0 class")]
    CompositionLeavesClass,
    #[error("derivative at pole x = {0}")]
    DerivativeAtPole(Rational),
    #[error("parametrization pole: t = {0} makes 1 - t² vanish")]
    ParametrizationPole(Rational),
    #[error("case {case} constraint violated: {reason}")]
    CaseConstraint { case: &'static str, reason: String },
    #[error("map does not belong to case {0}")]
    CaseMismatch(&'static str),
    #[error("cross-ratio needs four pairwise distinct points")]
    RepeatedPoints,
    #[error("{0} is not a fixed point")]
    NotFixedPoint(Rational),
    #[error("fixed points not rational (discriminant {0}); out of scope")]
    IrrationalFixedPoints(Rational),
    #[error("radius undefined (|a|_p = 0)")]
    RadiusUndefined,
    #[error("orbit exceeded size budget: {bits} bits > {limit} at step {step}")]
    SizeBudget { bits: u64, limit: u64, step: usize },
    #[error("basin undefined for non-attracting point {0}")]
    NotAttractor(Rational),
    #[error("{0} is the pole of the map; its image is inf")]
    PoleInput(Rational),
    #[error("iteration count must be at least 1")]
    ZeroCount,
}

pub type Result<T> = std::result::Result<T, Error>;
