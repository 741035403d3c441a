use alloc::string::String;
use core::fmt;

use num_bigint::BigUint;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    NonExactDivision,
    ArityMismatch { expected: usize, got: usize },
    NotPrime(u64),
    NotPrimePower(u64),
    /// Field order outside the supported range for element encoding.
    FieldTooLarge(u64),
    NotEnoughIrreducibles { degree: u32, wanted: usize, available: BigUint },
    DimensionMismatch { expected: usize, got: usize },
    Parse(String),
    InvalidPartition(String),
    FieldTooSmall { q: u64, q0: u64 },
    ScaleLimit { needed: BigUint, limit: u128 },
    InvalidDims(String),
    LengthMismatch { left: usize, right: usize },
    InvalidBackend(String),
    SizeMismatch { expected: usize, got: usize },
    InvalidParams(String),
}

impl Error {
    /// Errors that describe a well-formed request that cannot be carried
    /// out (field too small, sizes disagree, enumeration too large).
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::FieldTooSmall { .. }
                | Error::SizeMismatch { .. }
                | Error::ScaleLimit { .. }
                | Error::NotEnoughIrreducibles { .. }
                | Error::FieldTooLarge(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by the zero polynomial"),
            Error::NonExactDivision => write!(f, "divisor does not divide dividend"),
            Error::ArityMismatch { expected, got } => {
                write!(f, "expected {expected} parameters, got {got}")
            }
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            Error::FieldTooLarge(q) => write!(f, "field order {q} exceeds the supported maximum"),
            Error::NotEnoughIrreducibles { degree, wanted, available } => write!(
                f,
                "wanted {wanted} irreducibles of degree {degree}, only {available} exist"
            ),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvalidPartition(msg) => write!(f, "invalid partition: {msg}"),
            Error::FieldTooSmall { q, q0 } => write!(
                f,
                "no operator of this type exists over F_{q}; smallest admissible field is F_{q0}"
            ),
            Error::ScaleLimit { needed, limit } => {
                write!(f, "enumeration needs {needed} steps, limit is {limit}")
            }
            Error::InvalidDims(msg) => write!(f, "invalid dimensions: {msg}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "tuples have different lengths {left} and {right}")
            }
            Error::InvalidBackend(msg) => write!(f, "invalid backend: {msg}"),
            Error::SizeMismatch { expected, got } => {
                write!(f, "size mismatch: expected {expected}, got {got}")
            }
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
