//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invalid recurrence, 2 invalid decomposition text,
//! 3 `scan --expect-find` found nothing, 4 internal inconsistency, 5 a
//! precondition or budget was not met (or an I/O error), 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;
use zecklab_core::{
    construct_counterexample, count_legal, enumerate_legal, greedy_decompose, is_legal_with,
    lemma22_closed_form_medium, lemma22_closed_form_short, lemma22_lhs, naive_oracle,
    parse_recurrence, Budget, Decomposition, GrammarRule, LabError, RecurrenceSpec, SequenceHandle,
};

use crate::budget::budget_from_env;
use crate::grid::parse_grid;
use crate::json::{render_sum, summands, trace_steps, DecompositionJson};
use crate::record::{append_csv, probe_family, write_csv, ExperimentRecord, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_RECURRENCE: i32 = 1;
pub const EXIT_BAD_DECOMPOSITION: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;
pub const EXIT_UNMET: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "zecklab",
    version,
    about = "Generalized Zeckendorf decompositions over linear recurrences"
)]
pub struct Cli {
    /// Legality reading: `nested` re-aligns every tail, `outer` only the outermost level.
    #[arg(long, global = true, default_value = "nested", value_parser = parse_rule)]
    pub grammar: GrammarRule,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_rule(text: &str) -> Result<GrammarRule, String> {
    text.parse()
        .map_err(|_| format!("expected nested or outer, got {text:?}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanMode {
    /// Look for the first N with two or more decompositions.
    Nonunique,
    /// Confirm every N in range has exactly one decomposition.
    Unique,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the first terms of the sequence.
    Seq {
        #[arg(long)]
        rec: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long)]
        json: bool,
    },
    /// Greedy decomposition of N.
    Decompose {
        #[arg(long)]
        rec: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Legality of a decomposition written `index:mult,...`.
    Check {
        #[arg(long)]
        rec: String,
        #[arg(long)]
        decomp: String,
        #[arg(long)]
        json: bool,
    },
    /// Every legal decomposition of N.
    Enumerate {
        #[arg(long)]
        rec: String,
        #[arg(long)]
        n: u64,
        /// Use the brute-force oracle instead of grammar generation.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Scan 1..=max for uniqueness failures.
    Scan {
        #[arg(long)]
        rec: String,
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value = "nonunique")]
        mode: ScanMode,
        /// Exit 3 unless the scan finds what the mode looks for.
        #[arg(long)]
        expect_find: bool,
        /// Also compare with the brute-force oracle up to its bound.
        #[arg(long)]
        verify_oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the inequality behind the two-decomposition construction.
    Lemma22 {
        #[arg(long)]
        rec: String,
        #[arg(long)]
        json: bool,
    },
    /// Build and verify two distinct legal decompositions of one N.
    Counterexample {
        #[arg(long)]
        rec: String,
        #[arg(long)]
        json: bool,
    },
    /// Probe a family of recurrences and write CSV records.
    Probe {
        /// `s=A..B;k=A..B;c=A..B` with `k = L - s`.
        #[arg(long, conflicts_with = "rec", required_unless_present = "rec")]
        grid: Option<String>,
        /// Explicit recurrences; repeatable.
        #[arg(long)]
        rec: Vec<String>,
        #[arg(long, default_value_t = 5000)]
        max: u64,
        /// CSV file to append to; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed command: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<i32, Failure>;

fn io(e: std::io::Error) -> Failure {
    Failure::new(EXIT_UNMET, format!("i/o error: {e}"))
}

fn spec_of(text: &str) -> Result<RecurrenceSpec, Failure> {
    parse_recurrence(text).map_err(|e| {
        Failure::new(
            EXIT_BAD_RECURRENCE,
            format!("invalid recurrence {text:?}: {e}"),
        )
    })
}

fn unmet(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_UNMET, e.to_string())
}

fn lab_failure(e: LabError) -> Failure {
    match e {
        LabError::NotApplicable(_) | LabError::Enumeration(_) => unmet(e),
        LabError::ConstructionFailed { .. } | LabError::Greedy(_) => {
            Failure::new(EXIT_INCONSISTENT, e.to_string())
        }
    }
}

fn print_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string(value).map_err(unmet)?;
    writeln!(out, "{text}").map_err(io)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let rule = cli.grammar;
    let budget = budget_from_env().map_err(unmet)?;
    match &cli.command {
        Command::Seq { rec, count, json } => seq(&spec_of(rec)?, *count, *json, out),
        Command::Decompose {
            rec,
            n,
            trace,
            json,
        } => decompose(&spec_of(rec)?, n, *trace, *json, rule, out),
        Command::Check { rec, decomp, json } => check(&spec_of(rec)?, decomp, *json, rule, out),
        Command::Enumerate {
            rec,
            n,
            oracle,
            json,
        } => enumerate(&spec_of(rec)?, *n, *oracle, *json, rule, &budget, out),
        Command::Scan {
            rec,
            max,
            mode,
            expect_find,
            verify_oracle,
            json,
        } => scan(
            &spec_of(rec)?,
            *max,
            *mode,
            *expect_find,
            *verify_oracle,
            *json,
            rule,
            &budget,
            out,
        ),
        Command::Lemma22 { rec, json } => lemma22(&spec_of(rec)?, *json, out),
        Command::Counterexample { rec, json } => {
            counterexample(&spec_of(rec)?, *json, rule, &budget, out)
        }
        Command::Probe {
            grid,
            rec,
            max,
            out: path,
        } => {
            let specs = match grid {
                Some(g) => parse_grid(g)
                    .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?
                    .specs(),
                None => rec.iter().map(|r| spec_of(r)).collect::<Result<_, _>>()?,
            };
            probe(&specs, *max, path.as_deref(), rule, &budget, out)
        }
    }
}

fn seq(spec: &RecurrenceSpec, count: usize, json: bool, out: &mut dyn Write) -> Outcome {
    let mut h = SequenceHandle::new(spec.clone());
    let terms: Vec<String> = (1..=count).map(|n| h.term(n).to_string()).collect();
    if json {
        print_json(out, &terms)?;
    } else {
        writeln!(out, "{}", terms.join(" ")).map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn decompose(
    spec: &RecurrenceSpec,
    n: &str,
    trace: bool,
    json: bool,
    rule: GrammarRule,
    out: &mut dyn Write,
) -> Outcome {
    let n: BigUint = n.trim().parse().map_err(|_| {
        Failure::new(
            EXIT_USAGE,
            format!("N must be a non-negative integer, got {n:?}"),
        )
    })?;
    let mut h = SequenceHandle::new(spec.clone());
    let outcome =
        greedy_decompose(&mut h, &n).map_err(|e| Failure::new(EXIT_INCONSISTENT, e.to_string()))?;
    let d = &outcome.decomposition;
    let verdict = is_legal_with(d, spec, rule);
    if json {
        let body = DecompositionJson {
            n: n.to_string(),
            summands: summands(d, &mut h),
            legal: verdict.legal,
            derivation: None,
            reason: verdict.reason.clone(),
            trace: trace.then(|| trace_steps(&outcome.trace, &mut h)),
        };
        print_json(out, &body)?;
    } else {
        let (symbolic, numeric) = render_sum(d, &mut h);
        writeln!(out, "{n} = {symbolic}").map_err(io)?;
        writeln!(out, "{} = {numeric}", " ".repeat(n.to_string().len())).map_err(io)?;
        writeln!(out, "decomposition: {d}").map_err(io)?;
        writeln!(out, "legal ({rule}): {}", verdict.legal).map_err(io)?;
        if trace {
            for step in &outcome.trace {
                let taken: Vec<String> =
                    step.taken.iter().map(|(i, m)| format!("{i}:{m}")).collect();
                let kind = if step.term { "term" } else { "block" };
                writeln!(
                    out,
                    "  {kind} at {}: {} -> remainder {}",
                    step.anchor,
                    taken.join(","),
                    step.remainder
                )
                .map_err(io)?;
            }
        }
    }
    if !verdict.legal {
        return Err(Failure::new(
            EXIT_INCONSISTENT,
            format!(
                "greedy output {d} is not legal: {}",
                verdict.reason.unwrap_or_default()
            ),
        ));
    }
    Ok(EXIT_OK)
}

fn check(
    spec: &RecurrenceSpec,
    text: &str,
    json: bool,
    rule: GrammarRule,
    out: &mut dyn Write,
) -> Outcome {
    let d: Decomposition = text.parse().map_err(|e| {
        Failure::new(
            EXIT_BAD_DECOMPOSITION,
            format!("invalid decomposition {text:?}: {e}"),
        )
    })?;
    let mut h = SequenceHandle::new(spec.clone());
    let value = zecklab_core::evaluate(&d, &mut h);
    let verdict = is_legal_with(&d, spec, rule);
    if json {
        let body = DecompositionJson {
            n: value.to_string(),
            summands: summands(&d, &mut h),
            legal: verdict.legal,
            derivation: verdict.derivation.as_ref().map(|x| x.to_string()),
            reason: verdict.reason.clone(),
            trace: None,
        };
        print_json(out, &body)?;
    } else {
        writeln!(out, "{d} = {value}").map_err(io)?;
        match (&verdict.derivation, &verdict.reason) {
            (Some(der), _) => writeln!(out, "legal ({rule}): {der}").map_err(io)?,
            (None, reason) => {
                writeln!(out, "illegal ({rule}): {}", reason.as_deref().unwrap_or(""))
                    .map_err(io)?
            }
        }
    }
    Ok(EXIT_OK)
}

fn enumerate(
    spec: &RecurrenceSpec,
    n: u64,
    oracle: bool,
    json: bool,
    rule: GrammarRule,
    budget: &Budget,
    out: &mut dyn Write,
) -> Outcome {
    let mut h = SequenceHandle::new(spec.clone());
    let set = if oracle {
        naive_oracle(&mut h, n, rule, budget)
    } else {
        enumerate_legal(&mut h, n, rule, budget)
    }
    .map_err(unmet)?;
    if json {
        let list: Vec<_> = set
            .iter()
            .map(|d| DecompositionJson {
                n: n.to_string(),
                summands: summands(d, &mut h),
                legal: true,
                derivation: None,
                reason: None,
                trace: None,
            })
            .collect();
        print_json(out, &list)?;
    } else {
        writeln!(out, "N = {n}: {} legal decomposition(s)", set.len()).map_err(io)?;
        for d in &set {
            let (symbolic, _) = render_sum(d, &mut h);
            writeln!(out, "  {d}    ({symbolic})").map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn scan(
    spec: &RecurrenceSpec,
    max: u64,
    mode: ScanMode,
    expect_find: bool,
    verify_oracle: bool,
    json: bool,
    rule: GrammarRule,
    budget: &Budget,
    out: &mut dyn Write,
) -> Outcome {
    let mut h = SequenceHandle::new(spec.clone());
    if verify_oracle {
        for n in 0..=max.min(budget.oracle_max_n) {
            let fast = enumerate_legal(&mut h, n, rule, budget).map_err(unmet)?;
            let slow = naive_oracle(&mut h, n, rule, budget).map_err(unmet)?;
            if fast != slow {
                let show = |s: &std::collections::BTreeSet<Decomposition>| {
                    s.iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join(" | ")
                };
                return Err(Failure::new(
                    EXIT_INCONSISTENT,
                    format!(
                        "oracle mismatch at N = {n}: grammar [{}] vs oracle [{}]",
                        show(&fast),
                        show(&slow)
                    ),
                ));
            }
        }
    }
    let mut hit = None;
    for n in 1..=max {
        let count = count_legal(&mut h, n, rule, budget).map_err(unmet)?;
        if count != 1 {
            hit = Some((n, count));
            break;
        }
    }
    let found = match mode {
        ScanMode::Nonunique => hit.is_some(),
        ScanMode::Unique => hit.is_none(),
    };
    let decompositions: Vec<String> = match hit {
        Some((n, _)) => enumerate_legal(&mut h, n, rule, budget)
            .map_err(unmet)?
            .iter()
            .map(|d| d.to_string())
            .collect(),
        None => Vec::new(),
    };
    if json {
        print_json(
            out,
            &json!({
                "recurrence": spec.to_string(),
                "mode": format!("{mode:?}").to_lowercase(),
                "max": max.to_string(),
                "found": found,
                "n": hit.map(|(n, _)| n.to_string()),
                "count": hit.map(|(_, c)| c),
                "decompositions": decompositions,
                "oracle_verified": verify_oracle.then(|| max.min(budget.oracle_max_n).to_string()),
            }),
        )?;
    } else {
        match hit {
            Some((n, count)) => {
                writeln!(out, "N={n}: {count} decompositions").map_err(io)?;
                for d in &decompositions {
                    writeln!(out, "  {d}").map_err(io)?;
                }
            }
            None => writeln!(
                out,
                "every N in 1..={max} has exactly one legal decomposition"
            )
            .map_err(io)?,
        }
        if verify_oracle {
            writeln!(
                out,
                "oracle agrees for N <= {}",
                max.min(budget.oracle_max_n)
            )
            .map_err(io)?;
        }
    }
    if expect_find && !found {
        return Ok(EXIT_NOT_FOUND);
    }
    Ok(EXIT_OK)
}

fn lemma22(spec: &RecurrenceSpec, json: bool, out: &mut dyn Write) -> Outcome {
    let mut h = SequenceHandle::new(spec.clone());
    let value = lemma22_lhs(&mut h).map_err(lab_failure)?;
    let short = lemma22_closed_form_short(&mut h);
    let medium = lemma22_closed_form_medium(&mut h);
    let negative = value.sign() == num_bigint::Sign::Minus;
    if json {
        print_json(
            out,
            &json!({
                "recurrence": spec.to_string(),
                "lhs": value.to_string(),
                "negative": negative,
                "closed_form": short.as_ref().or(medium.as_ref()).map(|v| v.to_string()),
                "closed_form_matches": short.as_ref().or(medium.as_ref()).map(|v| *v == value),
            }),
        )?;
    } else {
        writeln!(
            out,
            "lhs = {value} ({})",
            if negative { "negative" } else { "NOT negative" }
        )
        .map_err(io)?;
        if let Some(v) = short.as_ref().or(medium.as_ref()) {
            let tag = if *v == value { "matches" } else { "differs" };
            writeln!(out, "closed form = {v} ({tag})").map_err(io)?;
        }
    }
    if !negative {
        return Err(Failure::new(
            EXIT_INCONSISTENT,
            format!("inequality fails for {spec}: {value}"),
        ));
    }
    Ok(EXIT_OK)
}

fn counterexample(
    spec: &RecurrenceSpec,
    json: bool,
    rule: GrammarRule,
    budget: &Budget,
    out: &mut dyn Write,
) -> Outcome {
    let mut h = SequenceHandle::new(spec.clone());
    let report = construct_counterexample(&mut h, rule, budget).map_err(lab_failure)?;
    if json {
        print_json(
            out,
            &json!({
                "recurrence": spec.to_string(),
                "n": report.n.to_string(),
                "x": report.x.to_string(),
                "a": summands(&report.decomp_a, &mut h),
                "b": summands(&report.decomp_b, &mut h),
                "window_ok": report.window_ok,
                "total": report.total.map(|t| t.to_string()),
            }),
        )?;
    } else {
        writeln!(out, "N = {} (x = {})", report.n, report.x).map_err(io)?;
        writeln!(out, "  A = {}", report.decomp_a).map_err(io)?;
        writeln!(out, "  B = {}", report.decomp_b).map_err(io)?;
        writeln!(out, "  window ok: {}", report.window_ok).map_err(io)?;
        match report.total {
            Some(t) => writeln!(out, "  legal decompositions of N: {t}").map_err(io)?,
            None => writeln!(
                out,
                "  legal decompositions of N: not enumerated (over budget)"
            )
            .map_err(io)?,
        }
    }
    Ok(EXIT_OK)
}

fn probe(
    specs: &[RecurrenceSpec],
    max: u64,
    path: Option<&std::path::Path>,
    rule: GrammarRule,
    budget: &Budget,
    out: &mut dyn Write,
) -> Outcome {
    let records: Vec<ExperimentRecord> = probe_family(specs, max, rule, budget)
        .iter()
        .map(|t| t.record())
        .collect();
    match path {
        Some(p) => {
            append_csv(&records, p).map_err(unmet)?;
            let count = |s: Status| records.iter().filter(|r| r.status == s).count();
            writeln!(
                out,
                "{} records -> {}: ok {}, not_applicable {}, budget_exceeded {}, inconsistent {}",
                records.len(),
                p.display(),
                count(Status::Ok),
                count(Status::NotApplicable),
                count(Status::BudgetExceeded),
                count(Status::Inconsistent)
            )
            .map_err(io)?;
        }
        None => write_csv(&records, &mut *out, true).map_err(unmet)?,
    }
    let broken: Vec<&str> = records
        .iter()
        .filter(|r| r.status == Status::Inconsistent)
        .map(|r| r.recurrence.as_str())
        .collect();
    if !broken.is_empty() {
        return Err(Failure::new(
            EXIT_INCONSISTENT,
            format!("inconsistent records: {}", broken.join(" ")),
        ));
    }
    Ok(EXIT_OK)
}
