use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {p}^{k} is over the 2^16 engine bound")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("matrix is singular")]
    Singular,
    #[error("degree {0} is outside the supported range 1..=6")]
    Degree(usize),
    #[error("invalid descriptor: {0}")]
    Descriptor(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("group order {order} exceeds the enumeration bound {bound}")]
    EnumerationBound { order: String, bound: u64 },
    #[error("closure exceeded the cap of {0} elements")]
    ClosureCap(usize),
    #[error("{ell} does not divide the group order")]
    EllDoesNotDivide { ell: u64 },
    #[error("no Sylow {ell}-subgroup strategy applies: {reason}")]
    NoSylowStrategy { ell: u64, reason: String },
    #[error("witness identity failed: {0}")]
    Witness(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(format!("json: {e}"))
    }
}
