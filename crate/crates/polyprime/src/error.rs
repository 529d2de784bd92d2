//! Error type shared by every module in the crate.
//!
//! All fallible operations return [`crate::Result`]. The variants are
//! deliberately coarse: callers almost always either propagate the error to
//! the CLI layer or treat it as a hard bug, so fine-grained matching buys
//! nothing. Each variant carries enough context to print a useful message.

use std::fmt;

/// Errors produced by sieving, polynomial arithmetic, counting, and the
/// analytic predictions.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric argument fell outside the supported range
    /// (e.g. a sieve limit below 2, a modulus below 2, an empty window).
    InvalidArgument(String),
    /// Polynomial text that does not match the accepted grammar, or a
    /// polynomial that is identically constant.
    Parse(String),
    /// Checked integer arithmetic overflowed. Counting never wraps silently;
    /// a polynomial value that does not fit in `i64` is reported here.
    Overflow(String),
    /// A brute-force bound was exceeded (e.g. root enumeration over a modulus
    /// larger than the configured cap).
    ResourceLimit { what: &'static str, requested: u64, cap: u64 },
    /// An allocation would exceed the configured memory budget
    /// (see [`crate::numeric::memory_budget`]).
    MemoryBudget { required_bytes: u64, budget_bytes: u64 },
    /// A numerical routine could not reach its accuracy target, or an exact
    /// identity failed its floating-point tolerance. This always indicates a
    /// bug or a truly pathological input, never a condition to ignore.
    Accuracy { context: &'static str, achieved: f64, required: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Parse(msg) => write!(f, "polynomial parse error: {msg}"),
            Error::Overflow(msg) => write!(f, "integer overflow: {msg}"),
            Error::ResourceLimit { what, requested, cap } => {
                write!(f, "{what} = {requested} exceeds the configured cap of {cap}")
            }
            Error::MemoryBudget { required_bytes, budget_bytes } => write!(
                f,
                "allocation of {required_bytes} bytes exceeds the memory budget of \
                 {budget_bytes} bytes (raise POLYPRIME_MAX_MEMORY to override)"
            ),
            Error::Accuracy { context, achieved, required } => write!(
                f,
                "{context}: reached {achieved:.3e}, required {required:.3e}"
            ),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
