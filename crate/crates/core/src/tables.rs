//! Embedded reference tables and the verifier that checks computed results
//! against them.
//!
//! The tables live in `data/corpus.txt` and are compiled into the library.
//! Each record is one line:
//!
//! ```text
//! TABLE <id> | KEY <key> | VALUES v1,v2,...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Whitespace around
//! the `|` separators and commas is optional. Recognized ids:
//!
//! | id          | key                        | values                               |
//! |-------------|----------------------------|--------------------------------------|
//! | `classes`   | b-value                    | every listed `n` with that `b(n)`    |
//! | `sets`      | `n`                        | members of `B_n` (may be empty)      |
//! | `divisors`  | upper bound of the list    | `n` whose `B_n` holds a divisor of `n` |
//! | `counts`    | limit                      | exactly one value: count of such `n <= limit` |
//! | `corrected` | `cases`                    | the `n` whose entries were corrected |
//!
//! Every `n` (class-list values, set keys, divisor-list values) must be
//! positive. Keys may not repeat within a table, and at most one `divisors` record may
//! appear. A file in this format can replace the embedded tables through
//! [`CorrigendumCorpus::from_path`] (the CLI's `--corpus` flag).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::bset::{Backend, Classifier};
use crate::error::Result;
use crate::sweep;

const EMBEDDED: &str = include_str!("../data/corpus.txt");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read corpus: {0}")]
    Io(#[from] std::io::Error),
}

/// Table identifiers used by the corpus file and in report entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableId {
    Classes,
    Sets,
    Divisors,
    Counts,
    Corrected,
}

impl TableId {
    pub fn as_str(self) -> &'static str {
        match self {
            TableId::Classes => "classes",
            TableId::Sets => "sets",
            TableId::Divisors => "divisors",
            TableId::Counts => "counts",
            TableId::Corrected => "corrected",
        }
    }

    /// Tables that produce checks (everything except `corrected`).
    pub const CHECKED: [TableId; 4] = [
        TableId::Classes,
        TableId::Sets,
        TableId::Divisors,
        TableId::Counts,
    ];
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "classes" => Ok(TableId::Classes),
            "sets" => Ok(TableId::Sets),
            "divisors" => Ok(TableId::Divisors),
            "counts" => Ok(TableId::Counts),
            "corrected" => Ok(TableId::Corrected),
            other => Err(format!("unknown table `{other}`")),
        }
    }
}

/// The reference tables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorrigendumCorpus {
    /// b-value to the listed `n` with that value, in listed order.
    pub class_lists: BTreeMap<u64, Vec<u64>>,
    /// `n` to the listed members of `B_n`.
    pub explicit_sets: BTreeMap<u64, Vec<u64>>,
    /// Listed `n` whose `B_n` contains a divisor of `n`, with the list's upper bound.
    pub divisor_list: Option<(u64, Vec<u64>)>,
    /// Limit to the number of `n <= limit` whose `B_n` contains a divisor of `n`.
    pub divisor_counts: BTreeMap<u64, usize>,
    pub corrected_cases: Vec<u64>,
}

/// The embedded tables.
pub fn load_corpus() -> CorrigendumCorpus {
    static CORPUS: OnceLock<CorrigendumCorpus> = OnceLock::new();
    CORPUS
        .get_or_init(|| EMBEDDED.parse().expect("embedded corpus is well-formed"))
        .clone()
}

/// Raw text of the embedded tables.
pub fn embedded_corpus_text() -> &'static str {
    EMBEDDED
}

impl CorrigendumCorpus {
    pub fn from_path(path: impl AsRef<Path>) -> std::result::Result<Self, CorpusError> {
        std::fs::read_to_string(path)?.parse()
    }

    /// Number of checks a full verification produces.
    pub fn datum_count(&self) -> usize {
        self.class_lists.values().map(Vec::len).sum::<usize>()
            + self.explicit_sets.len()
            + self.divisor_list.as_ref().map_or(0, |(_, ns)| ns.len())
            + self.divisor_counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.datum_count() == 0
    }

    /// Serializes back into the corpus file format.
    pub fn to_text(&self) -> String {
        fn join(vs: impl IntoIterator<Item = impl ToString>) -> String {
            vs.into_iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
        let mut out = String::new();
        if !self.corrected_cases.is_empty() {
            out += &format!(
                "TABLE corrected | KEY cases | VALUES {}\n",
                join(&self.corrected_cases)
            );
        }
        if let Some((bound, ns)) = &self.divisor_list {
            out += &format!("TABLE divisors | KEY {bound} | VALUES {}\n", join(ns));
        }
        for (limit, count) in &self.divisor_counts {
            out += &format!("TABLE counts | KEY {limit} | VALUES {count}\n");
        }
        for (v, ns) in &self.class_lists {
            out += &format!("TABLE classes | KEY {v} | VALUES {}\n", join(ns));
        }
        for (n, ms) in &self.explicit_sets {
            out += &format!("TABLE sets | KEY {n} | VALUES {}\n", join(ms));
        }
        out
    }
}

impl FromStr for CorrigendumCorpus {
    type Err = CorpusError;

    fn from_str(text: &str) -> std::result::Result<Self, Self::Err> {
        let mut corpus = CorrigendumCorpus::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| CorpusError::Parse { line, message };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split('|').map(str::trim).collect();
            let [table, key, values] = fields.as_slice() else {
                return Err(err(format!(
                    "expected 3 `|`-separated fields, found {}",
                    fields.len()
                )));
            };
            let table: TableId = field(table, "TABLE")
                .ok_or_else(|| err("missing `TABLE <id>`".into()))?
                .parse()
                .map_err(err)?;
            let key = field(key, "KEY").ok_or_else(|| err("missing `KEY <key>`".into()))?;
            let values = values
                .strip_prefix("VALUES")
                .ok_or_else(|| err("missing `VALUES`".into()))?
                .trim();
            let values = values
                .split(',')
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(|v| {
                    v.parse::<u64>()
                        .map_err(|_| err(format!("bad value `{v}`")))
                })
                .collect::<std::result::Result<Vec<u64>, _>>()?;

            if table == TableId::Corrected {
                corpus.corrected_cases.extend(values);
                continue;
            }
            let key: u64 = key.parse().map_err(|_| err(format!("bad key `{key}`")))?;
            let zero_n = match table {
                TableId::Classes | TableId::Divisors => values.contains(&0),
                TableId::Sets => key == 0,
                _ => false,
            };
            if zero_n {
                return Err(err("n must be positive".into()));
            }
            let duplicate = match table {
                TableId::Classes => corpus.class_lists.insert(key, values).is_some(),
                TableId::Sets => corpus.explicit_sets.insert(key, values).is_some(),
                TableId::Divisors => corpus.divisor_list.replace((key, values)).is_some(),
                TableId::Counts => {
                    let [count] = values.as_slice() else {
                        return Err(err("counts record needs exactly one value".into()));
                    };
                    corpus.divisor_counts.insert(key, *count as usize).is_some()
                }
                TableId::Corrected => unreachable!(),
            };
            if duplicate {
                return Err(err(format!("duplicate {table} record for key {key}")));
            }
        }
        Ok(corpus)
    }
}

fn field<'a>(text: &'a str, tag: &str) -> Option<&'a str> {
    let rest = text.strip_prefix(tag)?;
    let value = rest.trim();
    (rest.starts_with(char::is_whitespace) && !value.is_empty()).then_some(value)
}

/// What one check is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    N(u64),
    ClassMember { value: u64, position: usize, n: u64 },
    Limit(u64),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::N(n) => write!(f, "n={n}"),
            Subject::ClassMember { value, position, n } => {
                write!(f, "b={value}[{position}] n={n}")
            }
            Subject::Limit(limit) => write!(f, "limit={limit}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Datum {
    Value(u64),
    Set(Vec<u64>),
    Flag(bool),
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Value(v) => write!(f, "{v}"),
            Datum::Flag(b) => write!(f, "{b}"),
            Datum::Set(ms) => {
                let inner: Vec<String> = ms.iter().map(u64::to_string).collect();
                write!(f, "{{{}}}", inner.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub source: TableId,
    pub subject: Subject,
    pub expected: Datum,
    pub actual: Datum,
    pub status: Status,
}

impl ReportEntry {
    fn new(source: TableId, subject: Subject, expected: Datum, actual: Datum) -> Self {
        let status = if expected == actual {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            source,
            subject,
            expected,
            actual,
            status,
        }
    }
}

impl fmt::Display for ReportEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(
            f,
            "{status} {} {}: expected {}, got {}",
            self.source, self.subject, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// Cases flagged as corrected; listed for reference, not asserted.
    pub corrected_cases: Vec<u64>,
    pub entries: Vec<ReportEntry>,
    pub summary: Summary,
    /// Data left unchecked because they exceed [`VerifyOptions::max_n`].
    pub skipped: usize,
    /// Computed divisor-containment members up to the listed bound that the
    /// list omits. Informational only.
    pub unlisted_divisor_members: Vec<u64>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn statuses(&self) -> Vec<Status> {
        self.entries.iter().map(|e| e.status).collect()
    }
}

/// Which tables to check and how far.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub tables: BTreeSet<TableId>,
    /// Skip every datum that needs some `n` above this bound.
    pub max_n: Option<u64>,
    pub workers: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tables: TableId::CHECKED.into_iter().collect(),
            max_n: None,
            workers: sweep::default_workers(),
        }
    }
}

/// Verifies the embedded tables with default options.
pub fn verify_corrigendum(backend: Backend) -> Result<VerificationReport> {
    verify_corpus(&load_corpus(), backend, &VerifyOptions::default())
}

/// Checks every datum of `corpus`, in table order: class lists, explicit
/// sets, divisor list, divisor counts.
pub fn verify_corpus(
    corpus: &CorrigendumCorpus,
    backend: Backend,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let within = |n: u64| options.max_n.is_none_or(|max| n <= max);
    let wants = |t: TableId| options.tables.contains(&t);

    let divisor_bound = corpus
        .divisor_list
        .as_ref()
        .filter(|_| wants(TableId::Divisors))
        .map(|(bound, ns)| ns.iter().copied().max().unwrap_or(0).max(*bound));
    let count_limit = corpus
        .divisor_counts
        .keys()
        .copied()
        .filter(|&l| wants(TableId::Counts) && within(l))
        .max();
    let sweep_limit = divisor_bound
        .into_iter()
        .chain(count_limit)
        .map(|l| options.max_n.map_or(l, |max| l.min(max)))
        .max()
        .unwrap_or(0);

    let mut singles: BTreeSet<u64> = BTreeSet::new();
    if wants(TableId::Classes) {
        singles.extend(
            corpus
                .class_lists
                .values()
                .flatten()
                .copied()
                .filter(|&n| within(n)),
        );
    }
    if wants(TableId::Sets) {
        singles.extend(corpus.explicit_sets.keys().copied().filter(|&n| within(n)));
    }
    let singles: Vec<u64> = singles.into_iter().collect();
    let max_n = singles.iter().copied().max().unwrap_or(1).max(sweep_limit);

    let classifier = Classifier::new(max_n, backend).with_workers(options.workers);
    let sets: BTreeMap<u64, Vec<u64>> = singles
        .iter()
        .copied()
        .zip(sweep::map_items(&singles, options.workers, |n| {
            classifier.b_set(n)
        }))
        .map(|(n, set)| set.map(|s| (n, s.members)))
        .collect::<Result<_>>()?;
    let containing: Vec<u64> = if sweep_limit > 0 {
        classifier.divisor_containment_sweep(sweep_limit)?.members
    } else {
        Vec::new()
    };

    let mut entries = Vec::new();
    let mut skipped = 0;
    if wants(TableId::Classes) {
        for (&value, ns) in &corpus.class_lists {
            for (position, &n) in ns.iter().enumerate() {
                let subject = Subject::ClassMember { value, position, n };
                let Some(members) = sets.get(&n) else {
                    skipped += 1;
                    continue;
                };
                entries.push(ReportEntry::new(
                    TableId::Classes,
                    subject,
                    Datum::Value(value),
                    Datum::Value(members.len() as u64),
                ));
            }
        }
    }
    if wants(TableId::Sets) {
        for (&n, expected) in &corpus.explicit_sets {
            let Some(members) = sets.get(&n) else {
                skipped += 1;
                continue;
            };
            entries.push(ReportEntry::new(
                TableId::Sets,
                Subject::N(n),
                Datum::Set(expected.clone()),
                Datum::Set(members.clone()),
            ));
        }
    }
    let mut unlisted_divisor_members = Vec::new();
    if let (true, Some((bound, listed))) = (wants(TableId::Divisors), &corpus.divisor_list) {
        for &n in listed {
            if n > sweep_limit {
                skipped += 1;
                continue;
            }
            let actual = containing.binary_search(&n).is_ok();
            entries.push(ReportEntry::new(
                TableId::Divisors,
                Subject::N(n),
                Datum::Flag(true),
                Datum::Flag(actual),
            ));
        }
        unlisted_divisor_members = containing
            .iter()
            .copied()
            .take_while(|&n| n <= *bound)
            .filter(|n| !listed.contains(n))
            .collect();
    }
    if wants(TableId::Counts) {
        for (&limit, &expected) in &corpus.divisor_counts {
            if !within(limit) {
                skipped += 1;
                continue;
            }
            let actual = containing.partition_point(|&n| n <= limit);
            entries.push(ReportEntry::new(
                TableId::Counts,
                Subject::Limit(limit),
                Datum::Value(expected as u64),
                Datum::Value(actual as u64),
            ));
        }
    }

    let failed = entries.iter().filter(|e| e.status == Status::Fail).count();
    Ok(VerificationReport {
        corrected_cases: corpus.corrected_cases.clone(),
        summary: Summary {
            passed: entries.len() - failed,
            failed,
        },
        entries,
        skipped,
        unlisted_divisor_members,
    })
}

/// `n <= limit` whose computed `b(n)` has a class list, is absent from it,
/// and lies below that list's largest entry.
///
/// The class lists are open-ended, so only the interior of each list is
/// expected to be complete. A non-empty result points at either an
/// omission in the list or a disagreement with the membership rule.
pub fn completeness_scan(
    corpus: &CorrigendumCorpus,
    limit: u64,
    classifier: &Classifier,
) -> Result<Vec<(u64, u64)>> {
    if limit == 0 {
        return Ok(Vec::new());
    }
    let values = classifier.b_values(1, limit)?;
    Ok((1..=limit)
        .zip(values)
        .filter(|&(n, v)| {
            corpus
                .class_lists
                .get(&v)
                .is_some_and(|ns| ns.iter().max().is_some_and(|&top| n < top) && !ns.contains(&n))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_examples() {
        let corpus = load_corpus();
        assert_eq!(corpus.explicit_sets[&72], vec![6, 14, 15, 22, 26, 33]);
        assert_eq!(corpus.divisor_counts[&1000], 174);
        assert_eq!(corpus.class_lists[&20], vec![130, 154, 261, 553, 1199]);
        assert_eq!(corpus.explicit_sets.len(), 12);
        assert_eq!(corpus.class_lists.len(), 21);
        assert_eq!(corpus.corrected_cases, vec![54, 60, 68, 70, 72, 78, 91, 96]);
        assert_eq!(
            corpus.divisor_list,
            Some((100, vec![18, 45, 48, 70, 72, 75, 84, 90, 100]))
        );
        assert_eq!(load_corpus(), corpus);
    }

    #[test]
    fn corrected_cases_are_referenced() {
        let corpus = load_corpus();
        for n in &corpus.corrected_cases {
            let in_sets = corpus.explicit_sets.contains_key(n);
            let in_classes = corpus.class_lists.values().any(|ns| ns.contains(n));
            assert!(in_sets || in_classes, "{n}");
        }
    }

    #[test]
    fn text_round_trip() {
        let corpus = load_corpus();
        assert_eq!(
            corpus.to_text().parse::<CorrigendumCorpus>().unwrap(),
            corpus
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("TABLE sets | KEY 4\n", 1),
            ("# c\n\nTABLE bogus | KEY 4 | VALUES 1\n", 3),
            ("TABLE sets | KEY x | VALUES 1\n", 1),
            ("TABLE sets | KEY 4 | VALUES 1,a\n", 1),
            ("TABLE counts | KEY 4 | VALUES 1,2\n", 1),
            (
                "TABLE sets | KEY 4 | VALUES 1\nTABLE sets | KEY 4 | VALUES 2\n",
                2,
            ),
            ("TABLES sets | KEY 4 | VALUES 1\n", 1),
            ("TABLE sets | KEY 0 | VALUES\n", 1),
            ("TABLE classes | KEY 3 | VALUES 5,0\n", 1),
        ];
        for (text, expected_line) in cases {
            match text.parse::<CorrigendumCorpus>() {
                Err(CorpusError::Parse { line, .. }) => assert_eq!(line, expected_line, "{text:?}"),
                other => panic!("{text:?} parsed as {other:?}"),
            }
        }
    }

    #[test]
    fn empty_values_and_loose_spacing() {
        let c: CorrigendumCorpus = "TABLE sets|KEY 7|VALUES\nTABLE sets | KEY 9 | VALUES  1 , 2\n"
            .parse()
            .unwrap();
        assert_eq!(c.explicit_sets[&7], Vec::<u64>::new());
        assert_eq!(c.explicit_sets[&9], vec![1, 2]);
    }

    #[test]
    fn sets_only_gives_twelve_entries() {
        let options = VerifyOptions {
            tables: [TableId::Sets].into(),
            ..Default::default()
        };
        let report = verify_corpus(&load_corpus(), Backend::Fast, &options).unwrap();
        assert_eq!(report.entries.len(), 12);
        assert!(report.all_passed());
    }

    #[test]
    fn mutated_set_fails_once() {
        let mut corpus = load_corpus();
        corpus.explicit_sets.insert(54, vec![4]);
        let report = verify_corpus(&corpus, Backend::Fast, &VerifyOptions::default()).unwrap();
        let failures: Vec<_> = report.failures().collect();
        assert_eq!(failures.len(), 1);
        assert_eq!(failures[0].subject, Subject::N(54));
        assert_eq!(failures[0].source, TableId::Sets);
    }

    #[test]
    fn summary_matches_entries() {
        let report = verify_corrigendum(Backend::Fast).unwrap();
        let passes = report
            .statuses()
            .iter()
            .filter(|&&s| s == Status::Pass)
            .count();
        assert_eq!(report.summary.passed, passes);
        assert_eq!(
            report.summary.passed + report.summary.failed,
            report.entries.len()
        );
        assert_eq!(report.entries.len(), load_corpus().datum_count());
    }

    #[test]
    fn empty_corpus_gives_empty_report() {
        let report = verify_corpus(
            &CorrigendumCorpus::default(),
            Backend::Fast,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert!(report.entries.is_empty());
        assert!(CorrigendumCorpus::default().is_empty());
    }

    #[test]
    fn completeness_scan_small_limits() {
        let corpus = load_corpus();
        let classifier = Classifier::new(120, Backend::Fast);
        assert!(completeness_scan(&corpus, 1, &classifier)
            .unwrap()
            .is_empty());
        assert!(completeness_scan(&corpus, 101, &classifier)
            .unwrap()
            .is_empty());
        assert!(completeness_scan(&corpus, 0, &classifier)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn completeness_scan_reports_gaps() {
        let mut corpus = load_corpus();
        corpus.class_lists.get_mut(&1).unwrap().retain(|&n| n != 27);
        let classifier = Classifier::new(120, Backend::Fast);
        assert_eq!(
            completeness_scan(&corpus, 120, &classifier).unwrap(),
            vec![(27, 1)]
        );
    }
}
