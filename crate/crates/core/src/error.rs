use thiserror::Error;

/// Errors raised by the algebra kernel and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("relation 1 = 0 would make the ring trivial")]
    TrivialRelation,
    #[error("ring mismatch: `{left}` vs `{right}`")]
    RingMismatch { left: String, right: String },
    #[error("constant term of a unit series must be 1, found {0}")]
    NotUnitSeries(u32),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("polynomial is not symmetric in its root generators")]
    NotSymmetric,
    #[error("invalid root ring: {0}")]
    InvalidRoots(String),
    #[error("elementary generator e{index} used but only {available} roots exist")]
    ElementaryIndex { index: usize, available: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("result is not stable under enlarging the model: {0}")]
    Unstable(String),
    #[error("evaluation routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("manifest error: {0}")]
    Manifest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
