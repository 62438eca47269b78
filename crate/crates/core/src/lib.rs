//! Divisibility of the binomial family `C(n-i-1, i-1)` by `i`.
//!
//! For each `n` the set `B_n` collects every `i` with `2 <= i <= n/2`,
//! `gcd(i, n) > 1` and `i | C(n-i-1, i-1)`; `b(n)` is its size. The crate
//! computes these sets with a carry-counting backend ([`arith`]), checks
//! them against an exact big-integer backend ([`oracle`]), classifies
//! ranges of `n` by `b(n)` ([`bset`]) and verifies the published tables
//! ([`tables`]).
//!
//! ```
//! use binodiv::{b_set, Backend};
//! assert_eq!(b_set(91, Backend::Fast).unwrap().members, vec![28, 35]);
//! ```

pub mod arith;
pub mod bfile;
pub mod bset;
mod error;
pub mod oracle;
pub mod sweep;
pub mod tables;

pub use arith::{DigitVector, PrimeFactorization, SmallestFactorSieve};
pub use bset::{
    b_set, b_value, classify_range, contains_divisor, divisor_containment_sweep, BClassification,
    BSet, Backend, Classifier, DivisorContainmentResult,
};
pub use error::{Error, Result};
pub use tables::{load_corpus, verify_corrigendum, CorrigendumCorpus, VerificationReport};
