//! Per-recurrence experiment records and their CSV sink.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use zecklab_core::{probe_spec, Budget, GrammarRule, ProbeOutcome, ProbeStatus, RecurrenceSpec};

pub const CSV_HEADER: [&str; 10] = [
    "recurrence",
    "s",
    "L",
    "bound",
    "first_nonunique_N",
    "count_at_N",
    "lemma22",
    "counterexample_N",
    "status",
    "elapsed_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotApplicable,
    BudgetExceeded,
    Inconsistent,
}

impl From<ProbeStatus> for Status {
    fn from(s: ProbeStatus) -> Self {
        match s {
            ProbeStatus::Ok => Status::Ok,
            ProbeStatus::NotApplicable => Status::NotApplicable,
            ProbeStatus::BudgetExceeded => Status::BudgetExceeded,
            ProbeStatus::Inconsistent => Status::Inconsistent,
        }
    }
}

/// One CSV row. Big integers are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub recurrence: String,
    pub s: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub bound: u64,
    #[serde(rename = "first_nonunique_N")]
    pub first_nonunique_n: Option<String>,
    #[serde(rename = "count_at_N")]
    pub count_at_n: Option<u64>,
    pub lemma22: Option<String>,
    #[serde(rename = "counterexample_N")]
    pub counterexample_n: Option<String>,
    pub status: Status,
    pub elapsed_ms: u64,
}

impl ExperimentRecord {
    pub fn from_outcome(outcome: &ProbeOutcome, elapsed_ms: u64) -> Self {
        let (first, count) = match &outcome.scan {
            Ok(Some((n, c))) => (Some(n.to_string()), Some(*c as u64)),
            _ => (None, None),
        };
        ExperimentRecord {
            recurrence: outcome.spec.to_string(),
            s: outcome.spec.depth(),
            l: outcome.spec.order(),
            bound: outcome.bound,
            first_nonunique_n: first,
            count_at_n: count,
            lemma22: outcome.lemma22.as_ref().map(|v| v.to_string()),
            counterexample_n: match &outcome.counterexample {
                Some(Ok(report)) => Some(report.n.to_string()),
                _ => None,
            },
            status: outcome.status().into(),
            elapsed_ms,
        }
    }
}

/// A probe result with its timing.
#[derive(Debug, Clone)]
pub struct TimedOutcome {
    pub outcome: ProbeOutcome,
    pub elapsed_ms: u64,
}

impl TimedOutcome {
    pub fn record(&self) -> ExperimentRecord {
        ExperimentRecord::from_outcome(&self.outcome, self.elapsed_ms)
    }
}

/// Probes every spec in parallel; results keep the input order.
pub fn probe_family(
    specs: &[RecurrenceSpec],
    bound: u64,
    rule: GrammarRule,
    budget: &Budget,
) -> Vec<TimedOutcome> {
    specs
        .par_iter()
        .map(|spec| {
            let start = Instant::now();
            let outcome = probe_spec(spec, bound, rule, budget);
            TimedOutcome {
                outcome,
                elapsed_ms: start.elapsed().as_millis() as u64,
            }
        })
        .collect()
}

/// Writes records as CSV with the fixed header.
pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W, header: bool) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    if header {
        w.write_record(CSV_HEADER)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Appends rows to `path`, writing the header first when the file is new or empty.
pub fn append_csv(records: &[ExperimentRecord], path: &Path) -> csv::Result<()> {
    let file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    let empty = file.metadata()?.len() == 0;
    write_csv(records, file, empty)
}

pub fn read_csv<R: std::io::Read>(input: R) -> csv::Result<Vec<ExperimentRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}
