use thiserror::Error;

/// Errors raised by the arithmetic, parametrization and descent routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input is outside the domain of the operation (e.g. not a Pythagorean triple).
    #[error("domain error: {0}")]
    Domain(String),

    /// `(c+b)/h` and `(c-b)/h` are not both squares for this leg orientation.
    #[error("orientation error: ({a}, {b}, {c}) does not parametrize in this leg order")]
    Orientation { a: u64, b: u64, c: u64 },

    /// A half-integer appeared where an exact integer is required.
    #[error("non-integral value: {0}")]
    NonIntegral(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// One of the trivial points with `y = 0` (or `x = 0`) was supplied.
    #[error("excluded solution: {0}")]
    ExcludedSolution(String),

    #[error("no decomposition p = a^2 + 4b^2 exists for {0}")]
    NoDecomposition(u64),

    /// An internal post-condition failed. Reaching this signals a bug or bad upstream data.
    #[error("inconsistency: {0}")]
    Inconsistency(String),

    /// A reduction step did not shrink its input.
    #[error("recursion safety: {0}")]
    RecursionSafety(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::$variant(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
