//! `binodiv`: query, sweep, verify and export `B_n` / `b(n)`.
//!
//! Exit codes: 0 success, 1 verification or comparison mismatch,
//! 2 usage or parse error, 3 I/O error.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::Context;
use binodiv::bfile::{self, BFileRecord, Sequence};
use binodiv::sweep;
use binodiv::tables::{self, CorrigendumCorpus, TableId, VerifyOptions};
use binodiv::{BClassification, Backend, Classifier};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(
    name = "binodiv",
    version,
    about = "Divisibility of C(n-i-1, i-1) by i"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Fast,
    Oracle,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Fast => Backend::Fast,
            BackendArg::Oracle => Backend::Oracle,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Jsonl,
    Bfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SequenceArg {
    Bvalue,
    ContainsDivisorMembers,
    ClassMembers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Section {
    Classes,
    Sets,
    Divisors,
    Counts,
}

impl From<Section> for TableId {
    fn from(s: Section) -> Self {
        match s {
            Section::Classes => TableId::Classes,
            Section::Sets => TableId::Sets,
            Section::Divisors => TableId::Divisors,
            Section::Counts => TableId::Counts,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct Common {
    #[arg(long, value_enum, default_value = "fast")]
    backend: BackendArg,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Index of the first b-file record.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    offset: i64,
}

impl Common {
    fn workers(&self) -> usize {
        self.workers
            .map_or_else(sweep::default_workers, |w| w as usize)
    }

    fn classifier(&self, max_n: u64) -> Classifier {
        Classifier::new(max_n, self.backend.into()).with_workers(self.workers())
    }
}

#[derive(Debug, Clone, Args)]
struct Range {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    min: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max: u64,
}

#[derive(Debug, Clone, Args)]
struct SequenceSpec {
    #[arg(long, value_enum)]
    sequence: SequenceArg,
    /// b-value for `class-members`.
    #[arg(long = "class", required_if_eq("sequence", "class-members"))]
    class: Option<u64>,
    #[command(flatten)]
    range: Range,
}

impl SequenceSpec {
    fn sequence(&self) -> Sequence {
        match self.sequence {
            SequenceArg::Bvalue => Sequence::BValue,
            SequenceArg::ContainsDivisorMembers => Sequence::ContainsDivisorMembers,
            SequenceArg::ClassMembers => {
                Sequence::ClassMembers(self.class.expect("clap enforces --class"))
            }
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the members of B_n.
    Bset {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Print b(n) = |B_n|.
    Bvalue {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Group every n in a range by b(n).
    Classify {
        #[command(flatten)]
        range: Range,
        /// Only print the class with this b-value.
        #[arg(long = "class")]
        class: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Check computed values against the reference tables.
    Verify {
        /// Replacement corpus file (`TABLE <id> | KEY <k> | VALUES ...`).
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Tables to check (comma separated).
        #[arg(long, value_enum, value_delimiter = ',')]
        sections: Vec<Section>,
        /// Skip data that need n above this bound.
        #[arg(long)]
        max_n: Option<u64>,
        /// Also print passing checks.
        #[arg(long)]
        verbose: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Write a sequence as a b-file.
    Export {
        #[command(flatten)]
        spec: SequenceSpec,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compare a b-file against the computed sequence.
    Compare {
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        spec: SequenceSpec,
        #[command(flatten)]
        common: Common,
    },
    /// Time classify sweeps under each backend.
    Bench {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        repetitions: u32,
        /// Restrict to one backend; both run by default.
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        workers: Option<u64>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(anyhow::Error),
}

impl From<binodiv::Error> for Failure {
    fn from(e: binodiv::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = Result<ExitCode, Failure>;

const MISMATCH: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out).and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = out.flush();
            eprintln!("error: {msg}");
            eprintln!("run `binodiv --help` for usage");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Outcome {
    match command {
        Command::Bset { n, common } => cmd_bset(n, &common, out),
        Command::Bvalue { n, common } => cmd_bvalue(n, &common, out),
        Command::Classify {
            range,
            class,
            common,
        } => cmd_classify(&range, class, &common, out),
        Command::Verify {
            corpus,
            sections,
            max_n,
            verbose,
            common,
        } => cmd_verify(corpus, &sections, max_n, verbose, &common, out),
        Command::Export {
            spec,
            out: path,
            common,
        } => cmd_export(&spec, &path, &common),
        Command::Compare { file, spec, common } => cmd_compare(&file, &spec, &common, out),
        Command::Bench {
            max,
            repetitions,
            backend,
            workers,
        } => cmd_bench(max, repetitions, backend, workers, out),
    }
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_records(out: &mut impl Write, records: &[BFileRecord]) -> io::Result<()> {
    bfile::write_bfile(out, &[], records)
}

fn cmd_bset(n: u64, common: &Common, out: &mut impl Write) -> Outcome {
    let set = common.classifier(n).b_set(n)?;
    match common.format {
        Format::Table => writeln!(out, "{}", join(&set.members))?,
        Format::Csv => {
            writeln!(out, "n,i")?;
            for i in &set.members {
                writeln!(out, "{n},{i}")?;
            }
        }
        Format::Jsonl => writeln!(out, "{}", json!({ "n": n, "members": set.members }))?,
        Format::Bfile => {
            let records: Vec<_> = set
                .members
                .iter()
                .zip(common.offset..)
                .map(|(&value, index)| BFileRecord { index, value })
                .collect();
            write_records(out, &records)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bvalue(n: u64, common: &Common, out: &mut impl Write) -> Outcome {
    let b = common.classifier(n).b_value(n)?;
    match common.format {
        Format::Table => writeln!(out, "{b}")?,
        Format::Csv => writeln!(out, "n,b\n{n},{b}")?,
        Format::Jsonl => writeln!(out, "{}", json!({ "n": n, "b": b }))?,
        Format::Bfile => write_records(
            out,
            &[BFileRecord {
                index: n as i64 - 1 + common.offset,
                value: b,
            }],
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classify(
    range: &Range,
    class: Option<u64>,
    common: &Common,
    out: &mut impl Write,
) -> Outcome {
    let classifier = common.classifier(range.max);
    let result = classifier.classify_range(range.min, range.max)?;
    let selected: Vec<(u64, &[u64])> = match class {
        Some(v) => vec![(v, result.class(v))],
        None => result
            .classes
            .iter()
            .map(|(&v, ns)| (v, ns.as_slice()))
            .collect(),
    };
    match common.format {
        Format::Table => match class {
            Some(_) => writeln!(out, "{}", join(selected[0].1))?,
            None => {
                for (v, ns) in &selected {
                    writeln!(out, "{v}: {}", join(ns))?;
                }
            }
        },
        Format::Csv => {
            writeln!(out, "n,b")?;
            for (n, b) in by_n(&result, class) {
                writeln!(out, "{n},{b}")?;
            }
        }
        Format::Jsonl => {
            for (v, ns) in &selected {
                writeln!(out, "{}", json!({ "b": v, "members": ns }))?;
            }
        }
        Format::Bfile => {
            let records: Vec<BFileRecord> = match class {
                Some(_) => selected[0]
                    .1
                    .iter()
                    .zip(common.offset..)
                    .map(|(&value, index)| BFileRecord { index, value })
                    .collect(),
                None => by_n(&result, None)
                    .into_iter()
                    .map(|(n, b)| BFileRecord {
                        index: n as i64 - 1 + common.offset,
                        value: b,
                    })
                    .collect(),
            };
            write_records(out, &records)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// `(n, b(n))` pairs in order of `n`, optionally restricted to one class.
fn by_n(result: &BClassification, class: Option<u64>) -> Vec<(u64, u64)> {
    let mut pairs: Vec<(u64, u64)> = result
        .classes
        .iter()
        .filter(|(v, _)| class.is_none_or(|c| c == **v))
        .flat_map(|(&v, ns)| ns.iter().map(move |&n| (n, v)))
        .collect();
    pairs.sort_unstable();
    pairs
}

fn cmd_verify(
    corpus_path: Option<PathBuf>,
    sections: &[Section],
    max_n: Option<u64>,
    verbose: bool,
    common: &Common,
    out: &mut impl Write,
) -> Outcome {
    let corpus = match &corpus_path {
        Some(path) => CorrigendumCorpus::from_path(path).map_err(|e| match e {
            tables::CorpusError::Io(io) => {
                Failure::Io(anyhow::Error::new(io).context(format!("reading {}", path.display())))
            }
            parse => Failure::Usage(format!("{}: {parse}", path.display())),
        })?,
        None => tables::load_corpus(),
    };
    let mut options = VerifyOptions {
        max_n,
        workers: common.workers(),
        ..Default::default()
    };
    if !sections.is_empty() {
        options.tables = sections
            .iter()
            .map(|&s| TableId::from(s))
            .collect::<BTreeSet<_>>();
    }
    let report = tables::verify_corpus(&corpus, common.backend.into(), &options)?;

    if common.format == Format::Jsonl {
        for entry in &report.entries {
            writeln!(
                out,
                "{}",
                serde_json::to_string(entry).expect("entry serializes")
            )?;
        }
        writeln!(
            out,
            "{}",
            json!({ "summary": report.summary, "skipped": report.skipped })
        )?;
    } else {
        if !report.corrected_cases.is_empty() {
            writeln!(out, "# corrected cases: {}", join(&report.corrected_cases))?;
        }
        for entry in &report.entries {
            if verbose || entry.status == tables::Status::Fail {
                writeln!(out, "{entry}")?;
            }
        }
        if !report.unlisted_divisor_members.is_empty() {
            writeln!(
                out,
                "note: computed divisor-containment members not in the list: {}",
                join(&report.unlisted_divisor_members)
            )?;
        }
        if report.skipped > 0 {
            writeln!(out, "note: {} checks skipped above --max-n", report.skipped)?;
        }
        let total = report.entries.len();
        if report.all_passed() {
            writeln!(out, "all {total} checks passed")?;
        } else {
            writeln!(out, "{} of {total} checks failed", report.summary.failed)?;
        }
    }
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(MISMATCH)
    })
}

fn sequence_records(spec: &SequenceSpec, common: &Common) -> Result<Vec<BFileRecord>, Failure> {
    let classifier = common.classifier(spec.range.max);
    Ok(spec
        .sequence()
        .records(&classifier, spec.range.min, spec.range.max, common.offset)?)
}

fn cmd_export(spec: &SequenceSpec, path: &PathBuf, common: &Common) -> Outcome {
    let records = sequence_records(spec, common)?;
    let comments = vec![
        format!(
            "binodiv {} n={}..{}",
            spec.sequence(),
            spec.range.min,
            spec.range.max
        ),
        format!("offset {}", common.offset),
    ];
    let write = || -> anyhow::Result<()> {
        let file = fs::File::create(path)?;
        bfile::write_bfile(BufWriter::new(file), &comments, &records)?;
        Ok(())
    };
    write()
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::Io)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(
    path: &PathBuf,
    spec: &SequenceSpec,
    common: &Common,
    out: &mut impl Write,
) -> Outcome {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Io)?;
    let from_file = bfile::parse_bfile(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let computed = sequence_records(spec, common)?;
    let mismatches = bfile::diff(&from_file, &computed);
    for m in &mismatches {
        writeln!(out, "{m}")?;
    }
    if mismatches.is_empty() {
        writeln!(out, "identical")?;
        Ok(ExitCode::SUCCESS)
    } else {
        writeln!(out, "{} mismatches", mismatches.len())?;
        Ok(ExitCode::from(MISMATCH))
    }
}

fn cmd_bench(
    max: u64,
    repetitions: u32,
    backend: Option<BackendArg>,
    workers: Option<u64>,
    out: &mut impl Write,
) -> Outcome {
    let workers = workers.map_or_else(sweep::default_workers, |w| w as usize);
    let backends: Vec<Backend> = match backend {
        Some(b) => vec![b.into()],
        None => vec![Backend::Fast, Backend::Oracle],
    };
    let mut results: Vec<BClassification> = Vec::new();
    for &backend in &backends {
        let classifier = Classifier::new(max, backend).with_workers(workers);
        let mut best = Duration::MAX;
        let mut total = Duration::ZERO;
        let mut last = None;
        for _ in 0..repetitions {
            let start = Instant::now();
            let result = classifier.classify_range(1, max)?;
            let elapsed = start.elapsed();
            best = best.min(elapsed);
            total += elapsed;
            last = Some(result);
        }
        let mean = total / repetitions;
        let throughput = max as f64 / best.as_secs_f64().max(1e-9);
        writeln!(
            out,
            "{backend:>6}: n=1..{max} workers={workers} best {:.3} ms, mean {:.3} ms, {throughput:.0} n/s",
            best.as_secs_f64() * 1e3,
            mean.as_secs_f64() * 1e3,
        )?;
        results.push(last.expect("at least one repetition"));
    }
    if results.windows(2).any(|w| w[0] != w[1]) {
        writeln!(out, "backends disagree")?;
        return Ok(ExitCode::from(MISMATCH));
    }
    if results.len() > 1 {
        writeln!(out, "results identical")?;
    }
    Ok(ExitCode::SUCCESS)
}
