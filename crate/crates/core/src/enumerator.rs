//! Exhaustive enumeration of legal decompositions.
//!
//! Two independent code paths produce the same sets:
//!
//! - [`enumerate_legal`] generates decompositions directly from the grammar,
//!   pruning with the largest value a tail below a given index can reach;
//! - [`naive_oracle`] walks every bounded multiplicity vector with the right
//!   value and keeps the ones the recognizer accepts.
//!
//! Generation works on nonzero tops. A legal piece whose highest nonzero index
//! is `r` is either the bare summand `G_r` (depth `s >= 1` only) or a
//! full-prefix / block production aligned at `r + s`, whose `s` leading zeros
//! are virtual (nested tails, and the outermost level) or must come from the
//! gap above (outer-only tails).

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::legality::{is_legal_with, Decomposition, GrammarRule};
use crate::recurrence::RecurrenceSpec;
use crate::sequence::SequenceHandle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("N = {n} exceeds the enumeration bound {limit}")]
    BudgetExceeded { n: u64, limit: u64 },
    #[error("search visited more than {0} nodes")]
    NodeBudgetExceeded(u64),
    #[error("N = {n} exceeds the oracle bound {limit}")]
    OracleBoundExceeded { n: u64, limit: u64 },
    #[error("bijection counts are only defined for positive recurrences")]
    NotPlrs,
}

/// Limits for the enumerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest N [`enumerate_legal`] accepts.
    pub max_n: u64,
    /// Largest N [`naive_oracle`] accepts.
    pub oracle_max_n: u64,
    /// Search nodes per call, for either path.
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_n: 1_000_000,
            oracle_max_n: 500,
            max_nodes: 50_000_000,
        }
    }
}

/// Terms `G_1..` as machine integers, up to the first index whose term
/// exceeds `n` for good.
fn small_terms(handle: &mut SequenceHandle, n: u64) -> Vec<u64> {
    let last = handle.extend_until_exceeds(&BigUint::from(n));
    // one extra index so prefixes anchored at the top can be valued
    handle.ensure_len(last + handle.spec().order() + 1);
    let mut g = vec![0u64];
    g.extend(
        handle
            .terms()
            .iter()
            .map(|t| t.to_u64().unwrap_or(u64::MAX)),
    );
    g
}

/// `max { j : g[j] <= v }` over the cached machine terms.
fn top(g: &[u64], v: u64) -> usize {
    g.iter().rposition(|&t| t <= v && t > 0).unwrap_or(0)
}

struct Generator<'a> {
    spec: &'a RecurrenceSpec,
    rule: GrammarRule,
    g: Vec<u64>,
    /// `tail_max[j]`: largest value of a legal tail using indices `<= j` only.
    tail_max: Vec<u64>,
    nodes: u64,
    max_nodes: u64,
    out: BTreeSet<Decomposition>,
}

impl<'a> Generator<'a> {
    fn new(spec: &'a RecurrenceSpec, rule: GrammarRule, g: Vec<u64>, max_nodes: u64) -> Self {
        let mut gen = Generator {
            spec,
            rule,
            g,
            tail_max: Vec::new(),
            nodes: 0,
            max_nodes,
            out: BTreeSet::new(),
        };
        gen.tail_max = gen.compute_tail_max();
        gen
    }

    fn term(&self, j: usize) -> u64 {
        self.g.get(j).copied().unwrap_or(u64::MAX)
    }

    /// Values of the full prefix aligned at `h`, position by position.
    fn prefix_value(&self, h: usize, upto: usize) -> u64 {
        (1..upto)
            .map(|i| self.spec.c(i).saturating_mul(self.term(h + 1 - i)))
            .fold(0u64, u64::saturating_add)
    }

    fn compute_tail_max(&self) -> Vec<u64> {
        let s = self.spec.depth();
        let n = self.g.len().saturating_sub(self.spec.order() + 1);
        let mut headed = vec![0u64; n + 1];
        let mut tail_max = vec![0u64; n + 1];
        for r in 1..=n {
            headed[r] = self.headed_max(r, &tail_max);
            let mut best = tail_max[r - 1];
            if s > 0 {
                best = best.max(self.term(r));
            }
            let reach = match self.rule {
                GrammarRule::Nested => Some(r),
                GrammarRule::OuterOnly => r.checked_sub(s),
            };
            if let Some(q) = reach.filter(|&q| q >= 1) {
                best = best.max(headed[q]);
            }
            tail_max[r] = best;
        }
        tail_max
    }

    /// Largest value of a full-prefix or block production with nonzero top `r`.
    fn headed_max(&self, r: usize, tail_max: &[u64]) -> u64 {
        let s = self.spec.depth();
        let order = self.spec.order();
        let h = r + s;
        let mut best = 0;
        if h < order {
            best = self.prefix_value(h, h + 1);
        }
        for t in (s + 1)..=order.min(h) {
            let ct = self.spec.c(t);
            if ct == 0 || (t == s + 1 && ct == 1) {
                continue;
            }
            let v = self
                .prefix_value(h, t)
                .saturating_add((ct - 1).saturating_mul(self.term(h + 1 - t)))
                .saturating_add(tail_max[h - t]);
            best = best.max(v);
        }
        best
    }

    fn tick(&mut self) -> Result<(), EnumerationError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(EnumerationError::NodeBudgetExceeded(self.max_nodes));
        }
        Ok(())
    }

    /// Every legal piece of value `rem` using indices `<= limit`, appended to `acc`.
    /// `padded` allows virtual leading zeros regardless of the gap.
    fn pieces(
        &mut self,
        limit: usize,
        rem: u64,
        padded: bool,
        acc: &mut Decomposition,
    ) -> Result<(), EnumerationError> {
        if rem == 0 {
            self.out.insert(acc.clone());
            return Ok(());
        }
        let limit = limit.min(self.tail_max.len() - 1);
        if self.tail_max[limit] < rem && !padded {
            return Ok(());
        }
        let s = self.spec.depth();
        let hi = limit.min(top(&self.g, rem));
        for r in (1..=hi).rev() {
            self.tick()?;
            if s > 0 && self.term(r) == rem {
                acc.add(r, 1);
                self.out.insert(acc.clone());
                acc.remove(r, 1);
            }
            if padded || self.rule == GrammarRule::Nested || limit - r >= s {
                self.headed(r, rem, acc)?;
            }
        }
        Ok(())
    }

    fn headed(
        &mut self,
        r: usize,
        rem: u64,
        acc: &mut Decomposition,
    ) -> Result<(), EnumerationError> {
        let s = self.spec.depth();
        let order = self.spec.order();
        let h = r + s;
        if h < order && self.prefix_value(h, h + 1) == rem {
            let mut d = acc.clone();
            for i in (s + 1)..=h {
                d.add(h + 1 - i, self.spec.c(i));
            }
            self.out.insert(d);
        }
        for t in (s + 1)..=order.min(h) {
            let base = self.prefix_value(h, t);
            if base > rem {
                break;
            }
            let ct = self.spec.c(t);
            let idx = h + 1 - t;
            let g = self.term(idx);
            let first = if t == s + 1 { 1 } else { 0 };
            for i in (s + 1)..t {
                acc.add(h + 1 - i, self.spec.c(i));
            }
            for p in first..ct {
                let val = base.saturating_add(g.saturating_mul(p));
                if val > rem {
                    break;
                }
                let left = rem - val;
                if left > self.tail_max[h - t] {
                    continue;
                }
                acc.add(idx, p);
                let res = self.pieces(h - t, left, false, acc);
                acc.remove(idx, p);
                res?;
            }
            for i in (s + 1)..t {
                acc.remove(h + 1 - i, self.spec.c(i));
            }
        }
        Ok(())
    }
}

/// All legal decompositions of `n` under `rule`.
pub fn enumerate_legal(
    handle: &mut SequenceHandle,
    n: u64,
    rule: GrammarRule,
    budget: &Budget,
) -> Result<BTreeSet<Decomposition>, EnumerationError> {
    if n > budget.max_n {
        return Err(EnumerationError::BudgetExceeded {
            n,
            limit: budget.max_n,
        });
    }
    let g = small_terms(handle, n);
    let spec = handle.spec().clone();
    let mut gen = Generator::new(&spec, rule, g, budget.max_nodes);
    let limit = top(&gen.g, n);
    let mut acc = Decomposition::new();
    gen.pieces(limit, n, true, &mut acc)?;
    Ok(gen.out)
}

/// Number of legal decompositions of `n`.
pub fn count_legal(
    handle: &mut SequenceHandle,
    n: u64,
    rule: GrammarRule,
    budget: &Budget,
) -> Result<usize, EnumerationError> {
    enumerate_legal(handle, n, rule, budget).map(|set| set.len())
}

/// Brute force: every vector over indices `<= top_index(n)` with entries at
/// most `max(c_i, 1)` and value `n`, filtered by the recognizer.
///
/// The multiplicity cap loses nothing: full prefixes and blocks copy or
/// undercut coefficients, and a bare summand has multiplicity one.
pub fn naive_oracle(
    handle: &mut SequenceHandle,
    n: u64,
    rule: GrammarRule,
    budget: &Budget,
) -> Result<BTreeSet<Decomposition>, EnumerationError> {
    if n > budget.oracle_max_n {
        return Err(EnumerationError::OracleBoundExceeded {
            n,
            limit: budget.oracle_max_n,
        });
    }
    handle.extend_until_exceeds(&BigUint::from(n));
    let spec = handle.spec().clone();
    let terms: Vec<u64> = handle
        .terms()
        .iter()
        .map(|t| t.to_u64().unwrap_or(u64::MAX))
        .collect();
    let k = terms.iter().rposition(|&t| t <= n).map_or(0, |i| i + 1);
    let cap = spec.max_multiplicity();
    // reach[j]: largest sum of indices 1..=j
    let mut reach = vec![0u64; k + 1];
    for j in 1..=k {
        reach[j] = reach[j - 1].saturating_add(terms[j - 1].saturating_mul(cap));
    }
    let mut found = BTreeSet::new();
    let mut mults = vec![0u64; k + 1];
    let mut nodes = 0u64;
    // DFS from the top index down
    #[allow(clippy::too_many_arguments)]
    fn walk(
        j: usize,
        rem: u64,
        terms: &[u64],
        reach: &[u64],
        cap: u64,
        mults: &mut [u64],
        nodes: &mut u64,
        max_nodes: u64,
        hits: &mut Vec<Vec<u64>>,
    ) -> Result<(), EnumerationError> {
        *nodes += 1;
        if *nodes > max_nodes {
            return Err(EnumerationError::NodeBudgetExceeded(max_nodes));
        }
        if rem == 0 {
            hits.push(mults.to_vec());
            return Ok(());
        }
        if j == 0 || reach[j] < rem {
            return Ok(());
        }
        let g = terms[j - 1];
        for m in 0..=cap {
            let used = g.saturating_mul(m);
            if used > rem {
                break;
            }
            mults[j] = m;
            walk(
                j - 1,
                rem - used,
                terms,
                reach,
                cap,
                mults,
                nodes,
                max_nodes,
                hits,
            )?;
        }
        mults[j] = 0;
        Ok(())
    }
    let mut hits = Vec::new();
    walk(
        k,
        n,
        &terms,
        &reach,
        cap,
        &mut mults,
        &mut nodes,
        budget.max_nodes,
        &mut hits,
    )?;
    for v in hits {
        let d = Decomposition::from_pairs(
            v.iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(i, &m)| (i, m)),
        );
        if is_legal_with(&d, &spec, rule).legal {
            found.insert(d);
        }
    }
    Ok(found)
}

/// Smallest `1 <= N <= bound` with at least two legal decompositions, and
/// its count.
pub fn first_nonunique(
    handle: &mut SequenceHandle,
    bound: u64,
    rule: GrammarRule,
    budget: &Budget,
) -> Result<Option<(u64, usize)>, EnumerationError> {
    handle.extend_until_exceeds(&BigUint::from(bound));
    for n in 1..=bound {
        let count = count_legal(handle, n, rule, budget)?;
        if count >= 2 {
            return Ok(Some((n, count)));
        }
    }
    Ok(None)
}

/// For a positive recurrence: the number of legal decompositions whose top
/// summand is `G_n`, next to `G_{n+1} - G_n`. Counted by an unambiguous
/// recursion over the grammar, without enumerating.
pub fn bijection_count(
    handle: &mut SequenceHandle,
    n: usize,
) -> Result<(BigUint, BigUint), EnumerationError> {
    let spec = handle.spec().clone();
    if !spec.is_plrr() {
        return Err(EnumerationError::NotPlrs);
    }
    let order = spec.order();
    // headed[r]: legal vectors with a_1 > 0 at index r; below[j] = 1 + sum_{r<=j} headed[r]
    let mut headed = vec![BigUint::zero(); n + 1];
    let mut below = vec![BigUint::one(); n + 1];
    for r in 1..=n {
        let mut count = BigUint::zero();
        if r < order {
            count += 1u32;
        }
        for t in 1..=order.min(r) {
            let choices = if t == 1 { spec.c(1) - 1 } else { spec.c(t) };
            if choices > 0 {
                count += &below[r - t] * choices;
            }
        }
        below[r] = &below[r - 1] + &count;
        headed[r] = count;
    }
    let width = handle.term(n + 1).clone() - handle.term(n).clone();
    Ok((headed[n].clone(), width))
}
