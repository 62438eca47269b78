use thiserror::Error;

/// Errors raised by the arithmetic kernels and the sweeps built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty range: limit must be at least 1")]
    EmptyRange,
    #[error("input must be a positive integer, got 0")]
    Zero,
    #[error("invalid base {0}: base must be at least 2")]
    InvalidBase(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid modulus {0}: modulus must be at least 2")]
    InvalidModulus(u64),
    #[error("binomial index out of range: k = {k} exceeds m = {m}")]
    BinomialRange { m: u64, k: u64 },
    #[error("inverted range [{lo}, {hi}]")]
    InvertedRange { lo: u64, hi: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
