//! Exact big-integer reference for binomial coefficients.
//!
//! Deliberately slow and obvious. This module shares no code with
//! [`crate::arith`]; its only job is to be the independent side of every
//! backend comparison.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact `C(m, k)`.
///
/// Uses the recurrence `C(m, j) = C(m, j-1) * (m-j+1) / j`; every partial
/// value is itself a binomial coefficient, so each division is exact.
pub fn binomial_exact(m: u64, k: u64) -> Result<BigUint> {
    if k > m {
        return Err(Error::BinomialRange { m, k });
    }
    let k = k.min(m - k);
    let mut acc = BigUint::one();
    for j in 1..=k {
        acc *= m - j + 1;
        let (q, r) = acc.div_rem(&BigUint::from(j));
        debug_assert!(r.is_zero());
        acc = q;
    }
    Ok(acc)
}

/// `C(m, k) mod i`, reduced from the exact value.
pub fn binomial_mod(m: u64, k: u64, i: u64) -> Result<u64> {
    if i < 2 {
        return Err(Error::InvalidModulus(i));
    }
    let exact = binomial_exact(m, k)?;
    Ok((exact % i).to_u64().expect("residue is below the modulus"))
}

/// Whether `i` divides `C(m, k)`, by direct remainder.
pub fn divides_binomial_oracle(i: u64, m: u64, k: u64) -> Result<bool> {
    Ok(binomial_mod(m, k, i)? == 0)
}

/// Exponent of the prime `p` in `C(m, k)`, by repeated exact division.
pub fn valuation_exact(m: u64, k: u64, p: u64) -> Result<u32> {
    let mut value = binomial_exact(m, k)?;
    let p = BigUint::from(p);
    let mut count = 0;
    loop {
        let (q, r) = value.div_rem(&p);
        if !r.is_zero() {
            return Ok(count);
        }
        value = q;
        count += 1;
    }
}
