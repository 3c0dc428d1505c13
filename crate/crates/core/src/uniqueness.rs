//! Loss of uniqueness: the explicit two-decomposition construction, the
//! inequality it rests on, and range scans for conjecture probing.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::enumerator::{enumerate_legal, first_nonunique, Budget, EnumerationError};
use crate::greedy::{greedy_decompose, GreedyError};
use crate::legality::{evaluate, is_legal_with, Decomposition, GrammarRule};
use crate::recurrence::{classify, RecurrenceSpec, TheoremFlags};
use crate::sequence::SequenceHandle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("construction failed: {reason}\n{diagnostics}")]
    ConstructionFailed { reason: String, diagnostics: String },
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Greedy(#[from] GreedyError),
}

fn require_applicable(spec: &RecurrenceSpec) -> Result<(), LabError> {
    if classify(spec).thm113_applicable {
        return Ok(());
    }
    Err(LabError::NotApplicable(format!(
        "{spec} needs s >= 1, c_(s+1) > s, c_(s+2) > 0 and c_L > 1"
    )))
}

fn signed(handle: &mut SequenceHandle, n: usize) -> BigInt {
    BigInt::from(handle.term(n).clone())
}

/// `G_{s+L+2} - sum_{j=1}^{L-s-1} c_{s+j} G_{L+3-j} - G_{s+3}`, which the
/// construction needs to be negative.
pub fn lemma22_lhs(handle: &mut SequenceHandle) -> Result<BigInt, LabError> {
    let spec = handle.spec().clone();
    require_applicable(&spec)?;
    let s = spec.depth();
    let order = spec.order();
    let mut value = signed(handle, s + order + 2);
    for j in 1..=(order - s - 1) {
        value -= signed(handle, order + 3 - j) * spec.c(s + j);
    }
    value -= signed(handle, s + 3);
    Ok(value)
}

/// `(2 - G_3) c_{s+1}^2 - 2 c_{s+1}`, the closed form of [`lemma22_lhs`]
/// when `L = s + 2`.
pub fn lemma22_closed_form_short(handle: &mut SequenceHandle) -> Option<BigInt> {
    let spec = handle.spec().clone();
    if spec.order() != spec.depth() + 2 {
        return None;
    }
    let c = BigInt::from(spec.c(spec.depth() + 1));
    let g3 = signed(handle, 3);
    Some((BigInt::from(2) - g3) * &c * &c - BigInt::from(2) * &c)
}

/// The printed closed form for `L = s + 3`, evaluated with `G_4`:
/// `(3 - G_4) a^2 - 2ab - b^2 - 2a - 1 + (1 - b) c` for
/// `(a, b, c) = (c_{s+1}, c_{s+2}, c_{s+3})`. Only a cross-check.
pub fn lemma22_closed_form_medium(handle: &mut SequenceHandle) -> Option<BigInt> {
    let spec = handle.spec().clone();
    let s = spec.depth();
    if spec.order() != s + 3 {
        return None;
    }
    let a = BigInt::from(spec.c(s + 1));
    let b = BigInt::from(spec.c(s + 2));
    let c = BigInt::from(spec.c(s + 3));
    let g4 = signed(handle, 4);
    let one = BigInt::one();
    Some(
        (BigInt::from(3) - g4) * &a * &a
            - BigInt::from(2) * &a * &b
            - &b * &b
            - BigInt::from(2) * &a
            - &one
            + (&one - &b) * &c,
    )
}

/// Two legal decompositions of the same `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub n: BigUint,
    pub x: BigUint,
    /// Shared prefix, `G_{s+3}`, then the greedy decomposition of `x`.
    pub decomp_a: Decomposition,
    /// Shared prefix, then the greedy decomposition of `G_{s+3} + x`.
    pub decomp_b: Decomposition,
    /// `G_{L+s+2} < N < G_{L+s+3}`.
    pub window_ok: bool,
    /// Number of legal decompositions of `N`, when `N` is within the
    /// enumeration budget.
    pub total: Option<usize>,
}

/// Builds and verifies the two-decomposition witness. Legality is checked
/// under `rule`; any failed check is a [`LabError::ConstructionFailed`].
pub fn construct_counterexample(
    handle: &mut SequenceHandle,
    rule: GrammarRule,
    budget: &Budget,
) -> Result<CounterexampleReport, LabError> {
    let spec = handle.spec().clone();
    require_applicable(&spec)?;
    let s = spec.depth();
    let order = spec.order();
    handle.ensure_len(order + s + 3);

    let g_s3 = handle.term(s + 3).clone();
    let g_s4 = handle.term(s + 4).clone();
    let fail = |reason: &str, diagnostics: String| LabError::ConstructionFailed {
        reason: reason.into(),
        diagnostics,
    };
    let room = if g_s4 > g_s3 {
        (&g_s4 - &g_s3).min(g_s3.clone())
    } else {
        BigUint::zero()
    };
    if room <= BigUint::one() {
        return Err(fail(
            "no x with 0 < x < min(G_(s+3), G_(s+4) - G_(s+3))",
            format!("G_(s+3) = {g_s3}, G_(s+4) = {g_s4}"),
        ));
    }
    let x = BigUint::one();

    let mut shared = Decomposition::new();
    for j in 1..=(order - s - 1) {
        shared.add(order + 3 - j, spec.c(s + j));
    }
    let mut decomp_a = shared.clone();
    decomp_a.add(s + 3, 1);
    decomp_a.merge(&greedy_decompose(handle, &x)?.decomposition);
    let mut decomp_b = shared.clone();
    decomp_b.merge(&greedy_decompose(handle, &(&g_s3 + &x))?.decomposition);

    let n = evaluate(&shared, handle) + &g_s3 + &x;
    let diag = |handle: &mut SequenceHandle| {
        let a = is_legal_with(&decomp_a, &spec, rule);
        let b = is_legal_with(&decomp_b, &spec, rule);
        format!(
            "spec {spec}, N = {n}, x = {x}\n  A = {decomp_a} (value {}, legal {}, {})\n  B = {decomp_b} (value {}, legal {}, {})",
            evaluate(&decomp_a, handle),
            a.legal,
            a.reason.unwrap_or_default(),
            evaluate(&decomp_b, handle),
            b.legal,
            b.reason.unwrap_or_default(),
        )
    };
    if evaluate(&decomp_a, handle) != n || evaluate(&decomp_b, handle) != n {
        return Err(fail("decompositions do not evaluate to N", diag(handle)));
    }
    if decomp_a == decomp_b {
        return Err(fail("decompositions coincide", diag(handle)));
    }
    if !is_legal_with(&decomp_a, &spec, rule).legal || !is_legal_with(&decomp_b, &spec, rule).legal
    {
        return Err(fail("a decomposition is not legal", diag(handle)));
    }
    let lo = handle.term(order + s + 2).clone();
    let hi = handle.term(order + s + 3).clone();
    let window_ok = lo < n && n < hi;
    if !window_ok {
        return Err(fail(
            "N outside G_(L+s+2) < N < G_(L+s+3)",
            format!("{}\n  window ({lo}, {hi})", diag(handle)),
        ));
    }

    let total = match n.to_u64() {
        Some(small) if small <= budget.max_n => {
            let set = enumerate_legal(handle, small, rule, budget)?;
            if !set.contains(&decomp_a) || !set.contains(&decomp_b) {
                return Err(fail("enumeration misses a witness", diag(handle)));
            }
            Some(set.len())
        }
        _ => None,
    };
    Ok(CounterexampleReport {
        n,
        x,
        decomp_a,
        decomp_b,
        window_ok,
        total,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniquenessReport {
    AllUnique {
        bound: u64,
    },
    Violation {
        n: u64,
        count: usize,
        decompositions: Vec<Decomposition>,
    },
}

impl UniquenessReport {
    pub fn is_unique(&self) -> bool {
        matches!(self, UniquenessReport::AllUnique { .. })
    }
}

/// Scans `1..=bound` for the first `N` with several legal decompositions.
pub fn verify_uniqueness_range(
    handle: &mut SequenceHandle,
    bound: u64,
    rule: GrammarRule,
    budget: &Budget,
) -> Result<UniquenessReport, EnumerationError> {
    match first_nonunique(handle, bound, rule, budget)? {
        None => Ok(UniquenessReport::AllUnique { bound }),
        Some((n, count)) => {
            let decompositions = enumerate_legal(handle, n, rule, budget)?
                .into_iter()
                .collect();
            Ok(UniquenessReport::Violation {
                n,
                count,
                decompositions,
            })
        }
    }
}

/// A finite family of recurrences: `s` leading zeros followed by `L - s`
/// coefficients drawn from `coefficients`. Invalid points are skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyGrid {
    pub depth: RangeInclusive<usize>,
    /// Range of `L - s`.
    pub width: RangeInclusive<usize>,
    pub coefficients: RangeInclusive<u64>,
}

impl FamilyGrid {
    /// Every valid recurrence in the grid, ordered by depth, width, then
    /// coefficients lexicographically.
    pub fn specs(&self) -> Vec<RecurrenceSpec> {
        let mut out = Vec::new();
        let lo = *self.coefficients.start();
        let hi = *self.coefficients.end();
        for s in self.depth.clone() {
            for w in self.width.clone() {
                if w == 0 || hi < lo {
                    continue;
                }
                let base = hi - lo + 1;
                let Some(points) = base.checked_pow(w as u32) else {
                    continue;
                };
                for code in 0..points {
                    // last coefficient varies fastest
                    let mut coefficients = alloc::vec![0u64; s + w];
                    let mut rest = code;
                    for slot in coefficients[s..].iter_mut().rev() {
                        *slot = lo + rest % base;
                        rest /= base;
                    }
                    if coefficients[s] > 0 {
                        if let Ok(spec) = RecurrenceSpec::new(coefficients) {
                            out.push(spec);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Outcome of the probes run on one recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeOutcome {
    pub spec: RecurrenceSpec,
    pub flags: TheoremFlags,
    pub bound: u64,
    pub scan: Result<Option<(u64, usize)>, EnumerationError>,
    pub lemma22: Option<BigInt>,
    pub counterexample: Option<Result<CounterexampleReport, LabError>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeStatus {
    Ok,
    NotApplicable,
    BudgetExceeded,
    Inconsistent,
}

impl ProbeOutcome {
    pub fn status(&self) -> ProbeStatus {
        let broken_lemma = self.lemma22.as_ref().is_some_and(|v| *v >= BigInt::zero());
        let broken_witness = matches!(
            self.counterexample,
            Some(Err(LabError::ConstructionFailed { .. })) | Some(Err(LabError::Greedy(_)))
        );
        if broken_lemma || broken_witness {
            return ProbeStatus::Inconsistent;
        }
        let over_budget = self.scan.is_err()
            || matches!(self.counterexample, Some(Err(LabError::Enumeration(_))));
        if over_budget {
            return ProbeStatus::BudgetExceeded;
        }
        if !self.flags.thm113_applicable {
            return ProbeStatus::NotApplicable;
        }
        ProbeStatus::Ok
    }
}

/// Classifies `spec`, scans for the first non-unique `N <= bound`, and when
/// the construction applies evaluates the inequality and builds the witness.
pub fn probe_spec(
    spec: &RecurrenceSpec,
    bound: u64,
    rule: GrammarRule,
    budget: &Budget,
) -> ProbeOutcome {
    let flags = classify(spec);
    let mut handle = SequenceHandle::new(spec.clone());
    let scan = first_nonunique(&mut handle, bound, rule, budget);
    let (lemma22, counterexample) = if flags.thm113_applicable {
        (
            lemma22_lhs(&mut handle).ok(),
            Some(construct_counterexample(&mut handle, rule, budget)),
        )
    } else {
        (None, None)
    };
    ProbeOutcome {
        spec: spec.clone(),
        flags,
        bound,
        scan,
        lemma22,
        counterexample,
    }
}
