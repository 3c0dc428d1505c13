//! Decompositions and the legality grammar.
//!
//! A decomposition `N = sum a_i G_{m+1-i}` is stored sparsely as a map from
//! term index to multiplicity. The *alignment* `m` is the index that plays the
//! role of `a_1`; the dense view `a_1..a_m` is derived on demand.
//!
//! The grammar, for a recurrence of depth `s` and order `L`, accepts a dense
//! vector `a_1..a_m` when one of the following productions applies:
//!
//! 1. *Unit* (zero-depth recurrences only): `a_1 = 1` and every other entry is 0.
//! 2. *Full prefix*: `s < m < L` and `a_i = c_i` for all `i <= m`.
//! 3. *Block*: for some `t` in `s+1..=L`, `a_i = c_i` for `i < t` and
//!    `a_t < c_t`, followed by `l >= 0` zeros and a legal tail
//!    `a_{t+l+1}..a_m`. An empty tail is legal.
//!
//! For positive recurrences the outermost entry must also be positive, which
//! pins the alignment to the largest index used. For zero-depth recurrences
//! the alignment is free; leading zeros beyond `s` never help, so alignments
//! `max..=max+s` are searched.
//!
//! Under [`GrammarRule::Nested`] a tail is itself judged as a decomposition,
//! so it may also be re-aligned with up to `s` virtual leading zeros. Under
//! [`GrammarRule::OuterOnly`] tails are read at their fixed position.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::recurrence::RecurrenceSpec;
use crate::sequence::SequenceHandle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("malformed summand {0:?}, expected index:multiplicity")]
    Malformed(String),
    #[error("indices must be positive")]
    ZeroIndex,
    #[error("multiplicities must be positive")]
    ZeroMultiplicity,
    #[error("indices must be strictly decreasing")]
    NotDecreasing,
    #[error("alignment {alignment} is below the required {required}")]
    AlignmentTooSmall { alignment: usize, required: usize },
}

/// Canonical sparse decomposition: term index to positive multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decomposition {
    summands: BTreeMap<usize, u64>,
}

impl Decomposition {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from `(index, multiplicity)` pairs, summing repeated indices and
    /// dropping zero multiplicities.
    ///
    /// # Panics
    ///
    /// If an index is 0.
    pub fn from_pairs<I: IntoIterator<Item = (usize, u64)>>(pairs: I) -> Self {
        let mut d = Decomposition::new();
        for (i, m) in pairs {
            d.add(i, m);
        }
        d
    }

    pub fn single(index: usize) -> Self {
        Self::from_pairs([(index, 1)])
    }

    pub fn add(&mut self, index: usize, mult: u64) {
        assert!(index >= 1, "term indices are 1-based");
        if mult > 0 {
            *self.summands.entry(index).or_insert(0) += mult;
        }
    }

    /// Adds every summand of `other`.
    pub fn merge(&mut self, other: &Decomposition) {
        for (&i, &m) in &other.summands {
            self.add(i, m);
        }
    }

    /// Removes up to `mult` copies of `index`.
    pub fn remove(&mut self, index: usize, mult: u64) {
        if let Some(m) = self.summands.get_mut(&index) {
            *m = m.saturating_sub(mult);
            if *m == 0 {
                self.summands.remove(&index);
            }
        }
    }

    pub fn get(&self, index: usize) -> u64 {
        self.summands.get(&index).copied().unwrap_or(0)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.summands.keys().next_back().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Number of distinct indices used.
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    /// Summands in decreasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.summands.iter().rev().map(|(&i, &m)| (i, m))
    }

    /// Dense view `a_1..a_m` where `a_i` multiplies `G_{m+1-i}`.
    pub fn dense(&self, alignment: usize) -> Result<Vec<u64>, DecompositionError> {
        if let Some(max) = self.max_index() {
            if max > alignment {
                return Err(DecompositionError::AlignmentTooSmall {
                    alignment,
                    required: max,
                });
            }
        }
        Ok((1..=alignment)
            .map(|i| self.get(alignment + 1 - i))
            .collect())
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (i, m)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}:{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Decomposition {
    type Err = DecompositionError;

    /// Parses `"index:mult,index:mult,..."` with strictly decreasing indices.
    /// The empty string is the empty decomposition.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut d = Decomposition::new();
        if text.trim().is_empty() {
            return Ok(d);
        }
        let mut previous: Option<usize> = None;
        for tok in text.split(',') {
            let tok = tok.trim();
            let (i, m) = tok
                .split_once(':')
                .ok_or_else(|| DecompositionError::Malformed(tok.to_string()))?;
            let i: usize =
                parse_digits(i).ok_or_else(|| DecompositionError::Malformed(tok.to_string()))?;
            let m: u64 =
                parse_digits(m).ok_or_else(|| DecompositionError::Malformed(tok.to_string()))?;
            if i == 0 {
                return Err(DecompositionError::ZeroIndex);
            }
            if m == 0 {
                return Err(DecompositionError::ZeroMultiplicity);
            }
            if previous.is_some_and(|p| p <= i) {
                return Err(DecompositionError::NotDecreasing);
            }
            previous = Some(i);
            d.add(i, m);
        }
        Ok(d)
    }
}

fn parse_digits<T: FromStr>(s: &str) -> Option<T> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Strips a dense vector (aligned at `alignment`) down to its sparse form.
pub fn canonicalize(dense: &[u64], alignment: usize) -> Result<Decomposition, DecompositionError> {
    let mut d = Decomposition::new();
    for (pos, &a) in dense.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let i = pos + 1;
        if i > alignment {
            return Err(DecompositionError::AlignmentTooSmall {
                alignment,
                required: i,
            });
        }
        d.add(alignment + 1 - i, a);
    }
    Ok(d)
}

/// `sum multiplicity * G_index`; the empty decomposition is 0.
pub fn evaluate(d: &Decomposition, handle: &mut SequenceHandle) -> BigUint {
    if let Some(max) = d.max_index() {
        handle.ensure_len(max);
    }
    evaluate_cached(d, handle).expect("terms were just cached")
}

/// Read-only [`evaluate`]; `None` if a needed term is not cached.
pub fn evaluate_cached(d: &Decomposition, handle: &SequenceHandle) -> Option<BigUint> {
    let mut total = BigUint::zero();
    for (i, m) in d.iter() {
        total += handle.cached(i)? * m;
    }
    Some(total)
}

/// How tails of a block are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum GrammarRule {
    /// A tail is legal when it is a legal decomposition in its own right, i.e.
    /// at some alignment (up to `s` leading zeros above its first entry).
    #[default]
    Nested,
    /// A tail is read at the fixed position right after the block and gap.
    OuterOnly,
}

impl fmt::Display for GrammarRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrammarRule::Nested => "nested",
            GrammarRule::OuterOnly => "outer",
        })
    }
}

impl FromStr for GrammarRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nested" => Ok(GrammarRule::Nested),
            "outer" | "outer-only" => Ok(GrammarRule::OuterOnly),
            other => Err(format!(
                "unknown grammar rule {other:?} (expected nested or outer)"
            )),
        }
    }
}

/// One production of a derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Production {
    /// A single copy of the anchor term, nothing below it.
    Unit,
    /// `a_i = c_i` for every position down to index 1.
    FullPrefix,
    /// `c_1..c_{t-1}`, then `partial < c_t`, then `gap` zeros, then the tail.
    Block { t: usize, partial: u64, gap: usize },
}

impl Production {
    /// The grammar condition number: 1 (unit), 2 (full prefix) or 3 (block).
    pub fn condition(&self) -> u8 {
        match self {
            Production::Unit => 1,
            Production::FullPrefix => 2,
            Production::Block { .. } => 3,
        }
    }
}

/// A production applied with `a_1` at term index `anchor`. `padding` counts
/// the leading positions above the first stored entry (always zeros).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub anchor: usize,
    pub padding: usize,
    pub production: Production,
}

/// Parse tree of a legal decomposition, outermost block first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub alignment: usize,
    pub steps: Vec<Step>,
}

impl Derivation {
    /// Rebuilds the decomposition the derivation describes.
    pub fn replay(&self, spec: &RecurrenceSpec) -> Decomposition {
        let mut d = Decomposition::new();
        for step in &self.steps {
            let h = step.anchor;
            match step.production {
                Production::Unit => d.add(h, 1),
                Production::FullPrefix => {
                    for i in 1..=h {
                        d.add(h + 1 - i, spec.c(i));
                    }
                }
                Production::Block { t, partial, .. } => {
                    for i in 1..t {
                        d.add(h + 1 - i, spec.c(i));
                    }
                    d.add(h + 1 - t, partial);
                }
            }
        }
        d
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alignment {}", self.alignment)?;
        for step in &self.steps {
            match step.production {
                Production::Unit => write!(f, "; [1] unit at {}", step.anchor)?,
                Production::FullPrefix => write!(f, "; [2] full prefix at {}", step.anchor)?,
                Production::Block { t, partial, gap } => write!(
                    f,
                    "; [3] block at {} t={} a_t={} gap={}",
                    step.anchor, t, partial, gap
                )?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegalityVerdict {
    pub legal: bool,
    pub derivation: Option<Derivation>,
    pub reason: Option<String>,
}

impl LegalityVerdict {
    fn accept(derivation: Derivation) -> Self {
        LegalityVerdict {
            legal: true,
            derivation: Some(derivation),
            reason: None,
        }
    }

    fn reject(reason: String) -> Self {
        LegalityVerdict {
            legal: false,
            derivation: None,
            reason: Some(reason),
        }
    }
}

/// Legality under the default [`GrammarRule::Nested`] reading.
pub fn is_legal(d: &Decomposition, spec: &RecurrenceSpec) -> LegalityVerdict {
    is_legal_with(d, spec, GrammarRule::Nested)
}

pub fn is_legal_with(
    d: &Decomposition,
    spec: &RecurrenceSpec,
    rule: GrammarRule,
) -> LegalityVerdict {
    let Some(top) = d.max_index() else {
        return LegalityVerdict::accept(Derivation {
            alignment: 0,
            steps: Vec::new(),
        });
    };
    if let Some((i, m)) = d.iter().find(|&(_, m)| m > spec.max_multiplicity()) {
        return LegalityVerdict::reject(format!(
            "multiplicity {m} at index {i} exceeds every coefficient"
        ));
    }
    let mut dense = vec![0u64; top + 1];
    for (i, m) in d.iter() {
        dense[i] = m;
    }
    let mut rec = Recognizer::new(spec, &dense, rule);
    match rec.outer(top) {
        Some(derivation) => LegalityVerdict::accept(derivation),
        None => LegalityVerdict::reject(if spec.is_plrr() {
            format!("no derivation with a_1 at index {top}")
        } else {
            format!(
                "no derivation at any alignment {}..={}",
                top,
                top + spec.depth()
            )
        }),
    }
}

/// Legality of a dense vector `a_1..a_m` at exactly that alignment.
pub fn is_legal_aligned(
    vector: &[u64],
    spec: &RecurrenceSpec,
    rule: GrammarRule,
) -> LegalityVerdict {
    let m = vector.len();
    if m == 0 {
        return LegalityVerdict::accept(Derivation {
            alignment: 0,
            steps: Vec::new(),
        });
    }
    if spec.is_plrr() && vector[0] == 0 {
        return LegalityVerdict::reject(
            "a_1 must be positive for a positive recurrence".to_string(),
        );
    }
    let mut dense = vec![0u64; m + 1];
    for (pos, &a) in vector.iter().enumerate() {
        dense[m - pos] = a;
    }
    let mut rec = Recognizer::new(spec, &dense, rule);
    match rec.aligned(m) {
        Some(derivation) => LegalityVerdict::accept(derivation),
        None => LegalityVerdict::reject(format!("no derivation at alignment {m}")),
    }
}

#[derive(Debug, Clone, Copy)]
enum Memo {
    Unknown,
    Illegal,
    Legal(usize, Production),
}

/// Memoized recursive descent over real tops `r` (the highest index a tail
/// may occupy).
struct Recognizer<'a> {
    spec: &'a RecurrenceSpec,
    /// `a[j]` is the multiplicity of `G_j`; `a[0]` is unused.
    a: &'a [u64],
    rule: GrammarRule,
    padded: Vec<Memo>,
    fixed: Vec<Memo>,
}

impl<'a> Recognizer<'a> {
    fn new(spec: &'a RecurrenceSpec, a: &'a [u64], rule: GrammarRule) -> Self {
        let n = a.len();
        Recognizer {
            spec,
            a,
            rule,
            padded: vec![Memo::Unknown; n],
            fixed: vec![Memo::Unknown; n],
        }
    }

    fn coef(&self, r: usize, j: usize) -> u64 {
        if j == 0 || j > r {
            0
        } else {
            self.a[j]
        }
    }

    fn outer(&mut self, top: usize) -> Option<Derivation> {
        let (k, prod) = self.solve_padded(top)?;
        Some(self.build(top, k, prod))
    }

    fn aligned(&mut self, m: usize) -> Option<Derivation> {
        let prod = self.strict(m, m)?;
        Some(self.build(m, 0, prod))
    }

    fn build(&mut self, r: usize, k: usize, prod: Production) -> Derivation {
        let mut steps = Vec::new();
        let (mut r, mut k, mut prod) = (r, k, prod);
        loop {
            let anchor = r + k;
            steps.push(Step {
                anchor,
                padding: k,
                production: prod,
            });
            let Production::Block { t, gap, .. } = prod else {
                break;
            };
            let next = anchor - t - gap;
            if next == 0 {
                break;
            }
            let (nk, np) = self.tail(next).expect("memoized tail is legal");
            r = next;
            k = nk;
            prod = np;
        }
        Derivation {
            alignment: steps[0].anchor,
            steps,
        }
    }

    /// Legality of the tail whose highest real index is `r`.
    fn tail(&mut self, r: usize) -> Option<(usize, Production)> {
        match self.rule {
            GrammarRule::Nested => self.solve_padded(r),
            GrammarRule::OuterOnly => self.solve_fixed(r).map(|p| (0, p)),
        }
    }

    fn tail_legal(&mut self, r: usize) -> bool {
        r == 0 || self.tail(r).is_some()
    }

    fn solve_padded(&mut self, r: usize) -> Option<(usize, Production)> {
        match self.padded[r] {
            Memo::Legal(k, p) => return Some((k, p)),
            Memo::Illegal => return None,
            Memo::Unknown => {}
        }
        let mut found = None;
        for k in 0..=self.spec.depth() {
            if let Some(p) = self.strict(r + k, r) {
                found = Some((k, p));
                break;
            }
        }
        self.padded[r] = match found {
            Some((k, p)) => Memo::Legal(k, p),
            None => Memo::Illegal,
        };
        found
    }

    fn solve_fixed(&mut self, r: usize) -> Option<Production> {
        match self.fixed[r] {
            Memo::Legal(_, p) => return Some(p),
            Memo::Illegal => return None,
            Memo::Unknown => {}
        }
        let found = self.strict(r, r);
        self.fixed[r] = match found {
            Some(p) => Memo::Legal(0, p),
            None => Memo::Illegal,
        };
        found
    }

    /// Productions with `a_1` at index `h`, where entries above the real top
    /// `r` are virtual zeros.
    fn strict(&mut self, h: usize, r: usize) -> Option<Production> {
        let spec = self.spec;
        let s = spec.depth();
        let order = spec.order();
        let k = h - r;
        if h == 0 {
            return None;
        }
        if k == 0 && s > 0 && self.a[h] == 1 && (1..h).all(|j| self.a[j] == 0) {
            return Some(Production::Unit);
        }
        if s < h && h < order && (1..=h).all(|i| self.coef(r, h + 1 - i) == spec.c(i)) {
            return Some(Production::FullPrefix);
        }
        // positions i < t must match c_i; stop at the first mismatch
        for i in 1..=order.min(h) {
            let ai = self.coef(r, h + 1 - i);
            let ci = spec.c(i);
            if i > s && i > k && ai < ci {
                // widest gap first, so zero runs are not parsed as empty blocks
                let start = h - i;
                let mut lowest = start;
                while lowest > 0 && self.coef(r, lowest) == 0 {
                    lowest -= 1;
                }
                for next in lowest..=start {
                    if self.tail_legal(next) {
                        return Some(Production::Block {
                            t: i,
                            partial: ai,
                            gap: start - next,
                        });
                    }
                }
            }
            if ai != ci {
                break;
            }
        }
        None
    }
}
