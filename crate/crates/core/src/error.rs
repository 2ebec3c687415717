use alloc::string::String;
use core::fmt;

use crate::galois::FieldError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    Field(FieldError),
    /// Parameters violate a precondition.
    Invalid(String),
    /// An exhaustive computation would exceed its enumeration budget.
    Budget(String),
    /// A checked invariant failed at run time.
    Invariant(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Field(e) => write!(f, "{e}"),
            Error::Invalid(s) => write!(f, "invalid parameters: {s}"),
            Error::Budget(s) => write!(f, "enumeration budget exceeded: {s}"),
            Error::Invariant(s) => write!(f, "invariant violated: {s}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

impl From<FieldError> for Error {
    fn from(e: FieldError) -> Self {
        Error::Field(e)
    }
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => { $crate::error::Error::Invalid(alloc::format!($($arg)*)) };
}
pub(crate) use invalid;
