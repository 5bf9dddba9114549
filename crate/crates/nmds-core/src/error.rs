//! Error type shared across the crate.

/// Everything that can go wrong while building fields, curves, tracks or
/// running the completeness engines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("p = {0} is not prime")]
    CompositeP(u32),
    #[error("characteristic {0} is unsupported (odd primes >= 5 only)")]
    UnsupportedCharacteristic(u32),
    #[error("extension degree {0} is unsupported (h must be 1 or 2)")]
    UnsupportedDegree(u32),
    #[error("field order {q} exceeds the configured cap {cap}")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("{0} is not a prime power p^h with p >= 5 prime and h in {{1,2}}")]
    BadFieldOrder(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero vector has no projective normalization")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular curve")]
    SingularCurve,
    #[error("the defining cubic must have a nonzero X^3 coefficient")]
    MissingCubeTerm,
    #[error("cubic is a scalar multiple of the curve's defining form")]
    IdenticalCurves,
    #[error("no triangle of rational trisecants found")]
    NoTriangleFound,
    #[error("curve has {0} rational points; lifting requires at least 9")]
    TooFewPoints(usize),
    #[error("the hyperplane X0 = 0 corresponds to the curve itself, not to a distinct cubic")]
    SigmaHyperplane,
    #[error("enumeration of {size} objects exceeds the cap {cap}")]
    TooLarge { size: u64, cap: u64 },
    #[error("exhaustive scan of PG(8,{q}) exceeds the configured cap q <= {cap}")]
    ScanTooLarge { q: u32, cap: u32 },
    #[error("no good hyperplanes: the extension code is empty")]
    EmptyGoodSet,
    #[error("curve does not meet XYZ = 0 in 9 distinct rational points off the vertices")]
    NotNormalized,
    #[error("large-q method hypotheses violated: {0}")]
    HypothesisViolated(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to.
    /// 2 = usage, 3 = domain error, 4 = resource cap exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::FieldTooLarge { .. } | Error::TooLarge { .. } | Error::ScanTooLarge { .. } => 4,
            _ => 3,
        }
    }
}
