use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("polynomial {0:?} is reducible over GF({1})")]
    ReduciblePolynomial(Vec<u64>, u64),
    #[error("polynomial {0:?} has the wrong degree (expected {1})")]
    BadPolynomialDegree(Vec<u64>, usize),
    #[error("field size q^t = {qt} exceeds the enumeration bound {bound}")]
    SizeLimit { qt: u64, bound: u64 },
    #[error("gcd({nu}, {t}) != 1")]
    NotCoprime { nu: u64, t: u64 },
    #[error("extension degree t = {0} must be at least {1}")]
    DegreeTooSmall(u32, u32),
    #[error("q = {q} out of hypothesis: requires q >= {min}")]
    OutOfHypothesis { q: u64, min: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("singular matrix")]
    Singular,
    #[error("points are not in general position: {0}")]
    NotGeneralPosition(String),
    #[error("no transversal line found in any family")]
    NoTransversal,
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
