//! The sets `B_n`, their sizes `b(n)`, and range sweeps over them.
//!
//! Membership rule: `i` belongs to `B_n` when `2 <= i <= n/2`,
//! `gcd(i, n) > 1` and `i` divides `C(n-i-1, i-1)`. The upper cap keeps
//! `n-i-1 >= i-1`, so the binomial is always a positive integer. This is the
//! only place the rule is written down.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{self, SmallestFactorSieve, DEFAULT_SIEVE_LIMIT};
use crate::error::{Error, Result};
use crate::oracle;
use crate::sweep;

/// Which divisibility test decides membership.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Carry counting on native integers.
    #[default]
    Fast,
    /// Exact big-integer binomials reduced modulo `i`.
    Oracle,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Fast => "fast",
            Backend::Oracle => "oracle",
        })
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fast" => Ok(Backend::Fast),
            "oracle" => Ok(Backend::Oracle),
            other => Err(format!(
                "unknown backend `{other}` (expected fast or oracle)"
            )),
        }
    }
}

/// `B_n`, members ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BSet {
    pub n: u64,
    pub members: Vec<u64>,
}

impl BSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether some member divides `n`.
    pub fn contains_divisor(&self) -> bool {
        self.members.iter().any(|&i| self.n.is_multiple_of(i))
    }
}

/// Integers in `[lo, hi]` grouped by `b(n)`. Values with no members are absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BClassification {
    pub lo: u64,
    pub hi: u64,
    pub classes: BTreeMap<u64, Vec<u64>>,
}

impl BClassification {
    pub fn class(&self, value: u64) -> &[u64] {
        self.classes.get(&value).map_or(&[], Vec::as_slice)
    }

    pub fn value_of(&self, n: u64) -> Option<u64> {
        self.classes
            .iter()
            .find(|(_, ns)| ns.binary_search(&n).is_ok())
            .map(|(&v, _)| v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorContainmentResult {
    pub limit: u64,
    pub members: Vec<u64>,
    pub count: usize,
}

/// Computes `B_n` for any `n`, holding the factor sieve shared by all workers.
#[derive(Debug, Clone)]
pub struct Classifier {
    backend: Backend,
    workers: usize,
    sieve: SmallestFactorSieve,
}

impl Classifier {
    /// A classifier whose sieve covers every candidate `i` for `n <= max_n`.
    /// Larger `n` still work through trial division.
    pub fn new(max_n: u64, backend: Backend) -> Self {
        let limit = (max_n / 2).clamp(2, DEFAULT_SIEVE_LIMIT);
        Self {
            backend,
            workers: sweep::default_workers(),
            sieve: SmallestFactorSieve::new(limit).expect("sieve limit is positive"),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn b_set(&self, n: u64) -> Result<BSet> {
        if n == 0 {
            return Err(Error::Zero);
        }
        let candidates = (2..=n / 2).filter(|&i| i.gcd(&n) > 1);
        let members = match self.backend {
            Backend::Fast => candidates
                .filter(|&i| {
                    let f = self.sieve.factorize(i).expect("candidate is positive");
                    arith::divides_binomial_factored(&f, n - i - 1, i - 1)
                })
                .collect(),
            Backend::Oracle => candidates
                .filter(|&i| {
                    oracle::divides_binomial_oracle(i, n - i - 1, i - 1)
                        .expect("candidate range keeps k <= m and i >= 2")
                })
                .collect(),
        };
        Ok(BSet { n, members })
    }

    pub fn b_value(&self, n: u64) -> Result<u64> {
        Ok(self.b_set(n)?.len() as u64)
    }

    pub fn contains_divisor(&self, n: u64) -> Result<bool> {
        Ok(self.b_set(n)?.contains_divisor())
    }

    /// `b(n)` for every `n` in `[lo, hi]`, in order.
    pub fn b_values(&self, lo: u64, hi: u64) -> Result<Vec<u64>> {
        check_range(lo, hi)?;
        sweep::map_range(lo, hi, self.workers, |n| self.b_value(n))
            .into_iter()
            .collect()
    }

    /// `B_n` for every `n` in `[lo, hi]`, in order.
    pub fn b_sets(&self, lo: u64, hi: u64) -> Result<Vec<BSet>> {
        check_range(lo, hi)?;
        sweep::map_range(lo, hi, self.workers, |n| self.b_set(n))
            .into_iter()
            .collect()
    }

    pub fn classify_range(&self, lo: u64, hi: u64) -> Result<BClassification> {
        let values = self.b_values(lo, hi)?;
        let mut classes: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for (n, v) in (lo..=hi).zip(values) {
            classes.entry(v).or_default().push(n);
        }
        Ok(BClassification { lo, hi, classes })
    }

    pub fn divisor_containment_sweep(&self, limit: u64) -> Result<DivisorContainmentResult> {
        if limit == 0 {
            return Err(Error::EmptyRange);
        }
        let flags = sweep::map_range(1, limit, self.workers, |n| self.contains_divisor(n));
        let mut members = Vec::new();
        for (n, flag) in (1..=limit).zip(flags) {
            if flag? {
                members.push(n);
            }
        }
        Ok(DivisorContainmentResult {
            limit,
            count: members.len(),
            members,
        })
    }
}

fn check_range(lo: u64, hi: u64) -> Result<()> {
    if lo == 0 {
        return Err(Error::Zero);
    }
    if lo > hi {
        return Err(Error::InvertedRange { lo, hi });
    }
    Ok(())
}

pub fn b_set(n: u64, backend: Backend) -> Result<BSet> {
    Classifier::new(n, backend).b_set(n)
}

pub fn b_value(n: u64, backend: Backend) -> Result<u64> {
    Classifier::new(n, backend).b_value(n)
}

pub fn contains_divisor(n: u64, backend: Backend) -> Result<bool> {
    Classifier::new(n, backend).contains_divisor(n)
}

pub fn classify_range(lo: u64, hi: u64, backend: Backend) -> Result<BClassification> {
    Classifier::new(hi, backend).classify_range(lo, hi)
}

pub fn divisor_containment_sweep(limit: u64, backend: Backend) -> Result<DivisorContainmentResult> {
    Classifier::new(limit, backend).divisor_containment_sweep(limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BACKENDS: [Backend; 2] = [Backend::Fast, Backend::Oracle];

    #[test]
    fn b_set_examples() {
        for backend in BACKENDS {
            assert_eq!(
                b_set(54, backend).unwrap().members,
                vec![4, 14, 15, 16, 20, 21]
            );
            assert_eq!(b_set(91, backend).unwrap().members, vec![28, 35]);
            assert!(b_set(7, backend).unwrap().is_empty());
            assert_eq!(b_set(39, backend).unwrap().members, vec![9]);
        }
    }

    #[test]
    fn tiny_n_have_empty_range() {
        for n in 1..=3 {
            assert!(b_set(n, Backend::Fast).unwrap().is_empty());
        }
        assert_eq!(b_set(0, Backend::Fast).unwrap_err(), Error::Zero);
    }

    #[test]
    fn coprime_divisors_are_excluded() {
        // 5 and 25 divide their binomials but share no factor with 54
        for i in [5u64, 25] {
            assert!(arith::divides_binomial(i, 54 - i - 1, i - 1).unwrap());
        }
        assert!(!b_set(54, Backend::Fast).unwrap().members.contains(&25));
    }

    #[test]
    fn b_value_examples() {
        assert_eq!(b_value(54, Backend::Fast).unwrap(), 6);
        assert_eq!(b_value(1, Backend::Fast).unwrap(), 0);
        assert_eq!(b_value(98, Backend::Fast).unwrap(), 16);
    }

    #[test]
    fn classify_examples() {
        let c = classify_range(62, 62, Backend::Fast).unwrap();
        assert_eq!(c.classes, BTreeMap::from([(11, vec![62])]));
        let c = classify_range(1, 3, Backend::Fast).unwrap();
        assert_eq!(c.classes, BTreeMap::from([(0, vec![1, 2, 3])]));
        assert_eq!(c.value_of(2), Some(0));
        assert_eq!(c.value_of(4), None);
        assert_eq!(
            classify_range(5, 4, Backend::Fast).unwrap_err(),
            Error::InvertedRange { lo: 5, hi: 4 }
        );
        assert_eq!(
            classify_range(0, 4, Backend::Fast).unwrap_err(),
            Error::Zero
        );
    }

    #[test]
    fn contains_divisor_examples() {
        assert!(contains_divisor(18, Backend::Fast).unwrap());
        assert!(!contains_divisor(54, Backend::Fast).unwrap());
        assert!(!contains_divisor(7, Backend::Fast).unwrap());
    }

    #[test]
    fn containment_sweep_below_first_member() {
        let r = divisor_containment_sweep(17, Backend::Fast).unwrap();
        assert_eq!(r.count, 0);
        assert!(r.members.is_empty());
        assert_eq!(
            divisor_containment_sweep(18, Backend::Fast)
                .unwrap()
                .members,
            vec![18]
        );
        assert_eq!(
            divisor_containment_sweep(0, Backend::Fast).unwrap_err(),
            Error::EmptyRange
        );
    }

    #[test]
    fn backend_parses() {
        assert_eq!("fast".parse::<Backend>().unwrap(), Backend::Fast);
        assert_eq!("oracle".parse::<Backend>().unwrap(), Backend::Oracle);
        assert!("slow".parse::<Backend>().is_err());
    }
}
