//! OEIS-style b-files: `#` comment lines, then one `index value` pair per line.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::bset::Classifier;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BFileRecord {
    pub index: i64,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BFileError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: index {index} does not increase")]
    NonIncreasing { line: usize, index: i64 },
}

impl BFileError {
    pub fn line(&self) -> usize {
        match self {
            BFileError::Malformed { line, .. } | BFileError::NonIncreasing { line, .. } => *line,
        }
    }
}

/// Writes comment lines (each prefixed with `# `) followed by the records.
pub fn write_bfile<W: Write>(
    mut out: W,
    comments: &[String],
    records: &[BFileRecord],
) -> io::Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    for r in records {
        writeln!(out, "{} {}", r.index, r.value)?;
    }
    out.flush()
}

/// Parses b-file text. Comment and blank lines may appear anywhere; every
/// other line must be exactly two decimal integers with increasing indices.
pub fn parse_bfile(text: &str) -> std::result::Result<Vec<BFileRecord>, BFileError> {
    let mut records: Vec<BFileRecord> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let malformed = |reason: String| BFileError::Malformed { line, reason };
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let [index, value] = tokens.as_slice() else {
            return Err(malformed(format!(
                "expected `index value`, got {trimmed:?}"
            )));
        };
        let index: i64 = index
            .parse()
            .map_err(|_| malformed(format!("bad index {index:?}")))?;
        let value: u64 = value
            .parse()
            .map_err(|_| malformed(format!("bad value {value:?}")))?;
        if records.last().is_some_and(|r| r.index >= index) {
            return Err(BFileError::NonIncreasing { line, index });
        }
        records.push(BFileRecord { index, value });
    }
    Ok(records)
}

/// One index where the file and the computed sequence disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: i64,
    pub file: u64,
    pub computed: u64,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "index {}: file {} computed {}",
            self.index, self.file, self.computed
        )
    }
}

/// Differences over the indices present in both inputs (both sorted by index).
pub fn diff(file: &[BFileRecord], computed: &[BFileRecord]) -> Vec<Mismatch> {
    let mut out = Vec::new();
    let (mut a, mut b) = (file.iter().peekable(), computed.iter().peekable());
    while let (Some(x), Some(y)) = (a.peek(), b.peek()) {
        match x.index.cmp(&y.index) {
            std::cmp::Ordering::Less => {
                a.next();
            }
            std::cmp::Ordering::Greater => {
                b.next();
            }
            std::cmp::Ordering::Equal => {
                if x.value != y.value {
                    out.push(Mismatch {
                        index: x.index,
                        file: x.value,
                        computed: y.value,
                    });
                }
                a.next();
                b.next();
            }
        }
    }
    out
}

/// Sequences that can be exported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sequence {
    /// `b(n)` at index `n + offset - 1`.
    BValue,
    /// The k-th `n` in range whose `B_n` contains a divisor of `n`.
    ContainsDivisorMembers,
    /// The k-th `n` in range with `b(n)` equal to the given value.
    ClassMembers(u64),
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequence::BValue => f.write_str("bvalue"),
            Sequence::ContainsDivisorMembers => f.write_str("contains-divisor-members"),
            Sequence::ClassMembers(v) => write!(f, "class-members:{v}"),
        }
    }
}

impl FromStr for Sequence {
    type Err = String;

    /// Accepts `bvalue`, `contains-divisor-members` and `class-members:<v>`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "bvalue" => Ok(Sequence::BValue),
            "contains-divisor-members" => Ok(Sequence::ContainsDivisorMembers),
            _ => s
                .strip_prefix("class-members:")
                .and_then(|v| v.parse().ok())
                .map(Sequence::ClassMembers)
                .ok_or_else(|| format!("unknown sequence `{s}`")),
        }
    }
}

impl Sequence {
    /// Records of this sequence over `n` in `[lo, hi]`, with the first
    /// index at `offset` (identity indexing `index = n` for `b(n)` when
    /// `offset = lo = 1`).
    pub fn records(
        self,
        classifier: &Classifier,
        lo: u64,
        hi: u64,
        offset: i64,
    ) -> Result<Vec<BFileRecord>> {
        let sets = classifier.b_sets(lo, hi)?;
        let numbered = |values: Vec<u64>| -> Vec<BFileRecord> {
            values
                .into_iter()
                .zip(offset..)
                .map(|(value, index)| BFileRecord { index, value })
                .collect()
        };
        Ok(match self {
            Sequence::BValue => sets
                .iter()
                .map(|s| BFileRecord {
                    index: s.n as i64 - 1 + offset,
                    value: s.len() as u64,
                })
                .collect(),
            Sequence::ContainsDivisorMembers => numbered(
                sets.iter()
                    .filter(|s| s.contains_divisor())
                    .map(|s| s.n)
                    .collect(),
            ),
            Sequence::ClassMembers(v) => numbered(
                sets.iter()
                    .filter(|s| s.len() as u64 == v)
                    .map(|s| s.n)
                    .collect(),
            ),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bset::Backend;

    fn rec(index: i64, value: u64) -> BFileRecord {
        BFileRecord { index, value }
    }

    #[test]
    fn bvalue_export_first_lines() {
        let c = Classifier::new(5, Backend::Fast);
        let records = Sequence::BValue.records(&c, 1, 5, 1).unwrap();
        let mut buf = Vec::new();
        write_bfile(&mut buf, &[], &records).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1 0\n2 0\n3 0\n4 0\n5 0\n");
    }

    #[test]
    fn members_start_at_offset() {
        let c = Classifier::new(100, Backend::Fast);
        let records = Sequence::ContainsDivisorMembers
            .records(&c, 1, 100, 1)
            .unwrap();
        assert_eq!(records[0], rec(1, 18));
        assert_eq!(records.len(), 9);
        let shifted = Sequence::ContainsDivisorMembers
            .records(&c, 1, 100, 0)
            .unwrap();
        assert_eq!(shifted[0], rec(0, 18));
        assert!(Sequence::ContainsDivisorMembers
            .records(&c, 1, 17, 1)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn class_members() {
        let c = Classifier::new(120, Backend::Fast);
        let records = Sequence::ClassMembers(11).records(&c, 1, 120, 1).unwrap();
        assert_eq!(records, vec![rec(1, 62), rec(2, 120)]);
    }

    #[test]
    fn header_only_for_empty_sequence() {
        let mut buf = Vec::new();
        write_bfile(&mut buf, &["empty".to_string()], &[]).unwrap();
        assert_eq!(
            parse_bfile(std::str::from_utf8(&buf).unwrap()).unwrap(),
            vec![]
        );
    }

    #[test]
    fn parse_and_errors() {
        assert_eq!(
            parse_bfile("# c\n1 5\n2 7\n\n").unwrap(),
            vec![rec(1, 5), rec(2, 7)]
        );
        assert_eq!(
            parse_bfile("-1 5\n 0   7 \n").unwrap(),
            vec![rec(-1, 5), rec(0, 7)]
        );
        assert_eq!(parse_bfile("1 2\n2 x\n").unwrap_err().line(), 2);
        assert_eq!(parse_bfile("1 2 3\n").unwrap_err().line(), 1);
        assert_eq!(parse_bfile("# a\n1\n").unwrap_err().line(), 2);
        assert_eq!(
            parse_bfile("1 2\n1 3\n").unwrap_err(),
            BFileError::NonIncreasing { line: 2, index: 1 }
        );
    }

    #[test]
    fn diff_uses_overlap_only() {
        let file = [rec(1, 1), rec(2, 2), rec(3, 9)];
        let computed = [rec(2, 2), rec(3, 3), rec(4, 4)];
        assert_eq!(
            diff(&file, &computed),
            vec![Mismatch {
                index: 3,
                file: 9,
                computed: 3
            }]
        );
    }

    #[test]
    fn sequence_names() {
        for s in ["bvalue", "contains-divisor-members", "class-members:7"] {
            assert_eq!(s.parse::<Sequence>().unwrap().to_string(), s);
        }
        assert!("class-members:x".parse::<Sequence>().is_err());
    }
}
