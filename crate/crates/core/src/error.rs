use thiserror::Error;

/// Errors raised by tower construction, character arithmetic and the gamma
/// computations built on top of them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of size {size} exceeds the limit {limit}")]
    FieldTooLarge { size: u128, limit: u64 },
    #[error("no primitive polynomial found (search bug)")]
    NoPrimitivePolynomial,
    #[error("element with index {index:?} does not lie in the degree-{degree} subfield")]
    NotInSubfield { index: Option<u64>, degree: u32 },
    #[error("degree {inner} does not divide {outer}")]
    BadDivisor { inner: u32, outer: u32 },
    #[error("multiplicative character evaluated at zero")]
    EvalAtZero,
    #[error("enumeration of {count} items exceeds the limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u64 },
    #[error("matrix is not upper unitriangular")]
    NotUnipotent,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("expected n > m >= 1, got n = {n}, m = {m}")]
    SizeOrder { n: u32, m: u32 },
    #[error("k = {k} outside 0..={max}")]
    BadK { k: u32, max: u32 },
    #[error("character with exponent {exponent} at level {level} is not regular")]
    NotAdmissible { level: u32, exponent: u64 },
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("cache file {path}: {reason}")]
    CacheFormat { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by size limits rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::FieldTooLarge { .. } | Error::EnumerationTooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
