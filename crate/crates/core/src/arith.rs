//! Native-integer kernels: smallest-factor sieve, factorization, base-p
//! digits and carry counting.
//!
//! Nothing here forms a binomial coefficient. The p-adic valuation of
//! `C(a+b, a)` is the number of carries produced when `a` and `b` are added
//! in base `p` (Kummer), so every quantity stays within `u64`.

use crate::error::{Error, Result};

/// Sieve limit used when a caller does not choose one.
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

/// An integer together with its canonical prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }

    /// Multiplies the factors back out.
    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

/// Little-endian digits of an integer in a fixed base, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitVector {
    pub base: u64,
    pub digits: Vec<u64>,
}

impl DigitVector {
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn reconstruct(&self) -> u64 {
        self.digits
            .iter()
            .rev()
            .fold(0, |acc, &d| acc * self.base + d)
    }
}

/// Table of smallest prime factors for every integer in `[2, limit]`.
///
/// Built once and then shared read-only between workers.
#[derive(Debug, Clone)]
pub struct SmallestFactorSieve {
    limit: u64,
    spf: Vec<u32>,
}

impl SmallestFactorSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::EmptyRange);
        }
        assert!(
            limit <= u32::MAX as u64,
            "sieve limit {limit} exceeds the table width"
        );
        let len = limit as usize + 1;
        let mut spf = vec![0u32; len];
        for p in 2..len {
            if spf[p] != 0 {
                continue;
            }
            spf[p] = p as u32;
            let mut multiple = p.saturating_mul(p);
            while multiple < len {
                if spf[multiple] == 0 {
                    spf[multiple] = p as u32;
                }
                multiple += p;
            }
        }
        Ok(Self { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Least prime dividing `m`, or `None` when `m` is outside `[2, limit]`.
    pub fn smallest_factor(&self, m: u64) -> Option<u64> {
        if m < 2 || m > self.limit {
            return None;
        }
        Some(self.spf[m as usize] as u64)
    }

    /// Factorizes `m`, falling back to trial division above the sieve limit.
    pub fn factorize(&self, m: u64) -> Result<PrimeFactorization> {
        if m == 0 {
            return Err(Error::Zero);
        }
        if m > self.limit {
            return factorize(m);
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut rest = m;
        while rest > 1 {
            let p = self.spf[rest as usize] as u64;
            rest /= p;
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Ok(PrimeFactorization { value: m, factors })
    }
}

/// Smallest-factor table as a plain map from `m` to its least prime factor.
pub fn sieve_smallest_factor(limit: u64) -> Result<SmallestFactorSieve> {
    SmallestFactorSieve::new(limit)
}

/// Factorizes `m` by trial division.
pub fn factorize(m: u64) -> Result<PrimeFactorization> {
    if m == 0 {
        return Err(Error::Zero);
    }
    let mut factors = Vec::new();
    let mut rest = m;
    let mut d = 2u64;
    while d.saturating_mul(d) <= rest {
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(PrimeFactorization { value: m, factors })
}

pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m.is_multiple_of(2) {
        return m == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn digits_base(m: u64, p: u64) -> Result<DigitVector> {
    if p < 2 {
        return Err(Error::InvalidBase(p));
    }
    let mut digits = Vec::new();
    let mut rest = m;
    while rest > 0 {
        digits.push(rest % p);
        rest /= p;
    }
    Ok(DigitVector { base: p, digits })
}

/// Number of carries when adding `a` and `b` in base `p`, which equals
/// `v_p(C(a+b, a))`.
pub fn kummer_carries(a: u64, b: u64, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(carries(a, b, p))
}

// Caller guarantees `p` is prime.
#[inline]
pub(crate) fn carries(mut a: u64, mut b: u64, p: u64) -> u32 {
    let mut carry = 0u64;
    let mut count = 0u32;
    while a > 0 || b > 0 {
        let column = a % p + b % p + carry;
        carry = u64::from(column >= p);
        count += carry as u32;
        a /= p;
        b /= p;
    }
    count
}

/// `v_p(C(m, k))`.
pub fn valuation_binomial(m: u64, k: u64, p: u64) -> Result<u32> {
    if k > m {
        return Err(Error::BinomialRange { m, k });
    }
    kummer_carries(k, m - k, p)
}

/// Whether `i` divides `C(m, k)`.
pub fn divides_binomial(i: u64, m: u64, k: u64) -> Result<bool> {
    if i < 2 {
        return Err(Error::InvalidModulus(i));
    }
    if k > m {
        return Err(Error::BinomialRange { m, k });
    }
    Ok(divides_binomial_factored(&factorize(i)?, m, k))
}

/// Same test as [`divides_binomial`] for a modulus that is already factored.
/// Requires `k <= m`.
#[inline]
pub fn divides_binomial_factored(modulus: &PrimeFactorization, m: u64, k: u64) -> bool {
    debug_assert!(k <= m);
    modulus
        .factors()
        .iter()
        .all(|&(p, e)| carries(k, m - k, p) >= e)
}
