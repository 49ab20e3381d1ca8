//! Error type shared by every module in the crate.

use std::fmt;

/// Errors reported by geometric and measure-theoretic operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A point or vector does not match the dimension of its space.
    DimensionMismatch { expected: usize, got: usize },
    /// An atom function is not aligned with the measure it acts on.
    Misaligned { atoms: usize, values: usize },
    /// A spherical code does not have minimal separation strictly above 1.
    NotStrict { separation: f64 },
    /// Any other violated precondition; the message names the offending field.
    InvalidInput(String),
    /// An internal consistency check failed (a constructed certificate did not
    /// deliver its own predicted bound). Indicates a bug, not bad input.
    InternalCheck(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Misaligned { atoms, values } => {
                write!(f, "atom function misaligned: measure has {atoms} atoms, function has {values} values")
            }
            Error::NotStrict { separation } => {
                write!(f, "spherical code is not strict: separation {separation} <= 1")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InternalCheck(msg) => write!(f, "internal check failed: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
