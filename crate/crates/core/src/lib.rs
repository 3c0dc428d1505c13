//! Generalized Zeckendorf decompositions over linear recurrence sequences.
//!
//! A recurrence `G(n+1) = c_1 G(n) + ... + c_L G(n+1-L)` with non-negative
//! integer coefficients is either *positive* (`c_1 > 0`, a PLRR) or *s-deep
//! zero* (`c_1 = ... = c_s = 0 < c_{s+1}`, a ZLRR). Each kind comes with
//! prescribed initial terms and a grammar deciding which sums of terms are
//! *legal decompositions*. This crate provides:
//!
//! - [`recurrence`]: parsing, validation and classification of coefficient vectors,
//! - [`sequence`]: exact, memoized sequence terms,
//! - [`legality`]: decompositions and the legality recognizer,
//! - [`greedy`]: the constructive greedy decomposition,
//! - [`enumerator`]: exhaustive enumeration of legal decompositions, with an
//!   independent brute-force oracle,
//! - [`uniqueness`]: the explicit non-uniqueness construction and conjecture probes.
//!
//! The crate is `no_std` and only needs `alloc`. All term arithmetic is
//! arbitrary precision.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod enumerator;
pub mod greedy;
pub mod legality;
pub mod recurrence;
pub mod sequence;
pub mod uniqueness;

pub use enumerator::{
    bijection_count, count_legal, enumerate_legal, first_nonunique, naive_oracle, Budget,
    EnumerationError,
};
pub use greedy::{greedy_decompose, BlockTrace, GreedyError, GreedyOutcome};
pub use legality::{
    canonicalize, evaluate, is_legal, is_legal_aligned, is_legal_with, Decomposition,
    DecompositionError, Derivation, GrammarRule, LegalityVerdict, Production, Step,
};
pub use recurrence::{
    classify, parse_recurrence, RecurrenceError, RecurrenceKind, RecurrenceSpec, TheoremFlags,
};
pub use sequence::SequenceHandle;
pub use uniqueness::{
    construct_counterexample, lemma22_closed_form_medium, lemma22_closed_form_short, lemma22_lhs,
    probe_spec, verify_uniqueness_range, CounterexampleReport, FamilyGrid, LabError, ProbeOutcome,
    ProbeStatus, UniquenessReport,
};
