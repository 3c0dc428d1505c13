//! Exact sequence terms with the prescribed initial conditions.
//!
//! Terms are 1-indexed: `term(1)` is `G_1`. The first `L` terms (four for the
//! Lagonacci recurrence `0,1,1`) come from the initial-condition rules, every
//! later term from the recurrence itself.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::recurrence::RecurrenceSpec;

/// A recurrence together with an append-only cache of its terms.
///
/// Extending the cache needs `&mut self`; reads of cached terms only need
/// `&self`, so a handle extended up front can be shared across threads.
#[derive(Debug, Clone)]
pub struct SequenceHandle {
    spec: RecurrenceSpec,
    terms: Vec<BigUint>,
    prescribed: usize,
    largest: BigUint,
    duplicate_values: bool,
}

impl SequenceHandle {
    pub fn new(spec: RecurrenceSpec) -> Self {
        let initial = initial_terms(&spec);
        let mut handle = SequenceHandle {
            prescribed: initial.len(),
            spec,
            terms: Vec::new(),
            largest: BigUint::zero(),
            duplicate_values: false,
        };
        for t in initial {
            handle.push(t);
        }
        handle
    }

    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    /// Number of terms fixed by initial conditions rather than the recurrence.
    pub fn prescribed_len(&self) -> usize {
        self.prescribed
    }

    /// Number of cached terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Cached terms, 0-based (`terms()[n - 1] == G_n`).
    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    /// Whether two cached indices carry the same value.
    pub fn has_duplicate_values(&self) -> bool {
        self.duplicate_values
    }

    /// `G_n`, extending the cache as needed.
    ///
    /// # Panics
    ///
    /// If `n == 0`.
    pub fn term(&mut self, n: usize) -> &BigUint {
        assert!(n >= 1, "sequence terms are 1-indexed");
        self.ensure_len(n);
        &self.terms[n - 1]
    }

    pub fn cached(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(1).and_then(|i| self.terms.get(i))
    }

    pub fn ensure_len(&mut self, n: usize) {
        while self.terms.len() < n {
            let next = self.next_from_recurrence();
            self.push(next);
        }
    }

    /// Extends the cache until the last `L` consecutive terms all exceed
    /// `bound`; every later term then exceeds it as well. Returns the last
    /// computed index.
    pub fn extend_until_exceeds(&mut self, bound: &BigUint) -> usize {
        let order = self.spec.order();
        self.ensure_len(order);
        while !self.covers(bound) {
            let next = self.next_from_recurrence();
            self.push(next);
        }
        self.terms.len()
    }

    /// True when the cache already reaches past `bound` (see
    /// [`extend_until_exceeds`](Self::extend_until_exceeds)).
    pub fn covers(&self, bound: &BigUint) -> bool {
        let order = self.spec.order();
        self.terms.len() >= order
            && self.terms[self.terms.len() - order..]
                .iter()
                .all(|t| t > bound)
    }

    /// `max { n : G_n <= value }`, or 0 when `value == 0`. Value ties resolve to
    /// the larger index.
    pub fn top_index(&mut self, value: &BigUint) -> usize {
        self.extend_until_exceeds(value);
        self.top_index_cached(value)
            .expect("cache was just extended past the value")
    }

    /// Read-only [`top_index`](Self::top_index); `None` if the cache does not
    /// yet reach past `value`.
    pub fn top_index_cached(&self, value: &BigUint) -> Option<usize> {
        if !self.covers(value) {
            return None;
        }
        Some(
            self.terms
                .iter()
                .rposition(|t| t <= value)
                .map_or(0, |i| i + 1),
        )
    }

    /// Largest index whose term equals `value`, among cached terms.
    pub fn index_of(&self, value: &BigUint) -> Option<usize> {
        self.terms.iter().rposition(|t| t == value).map(|i| i + 1)
    }

    /// Checks `G_n = sum c_i G_{n-i}` for every cached `n` past the prescribed
    /// prefix.
    pub fn recurrence_holds(&self) -> bool {
        let order = self.spec.order();
        (self.prescribed..self.terms.len()).all(|i| {
            let mut acc = BigUint::zero();
            for j in 1..=order {
                acc += &self.terms[i - j] * self.spec.c(j);
            }
            acc == self.terms[i]
        })
    }

    fn next_from_recurrence(&self) -> BigUint {
        let n = self.terms.len();
        let mut acc = BigUint::zero();
        for (j, &c) in self.spec.coefficients().iter().enumerate() {
            if c != 0 && n > j {
                acc += &self.terms[n - 1 - j] * c;
            }
        }
        acc
    }

    fn push(&mut self, t: BigUint) {
        if t <= self.largest && self.terms.contains(&t) {
            self.duplicate_values = true;
        }
        if t > self.largest {
            self.largest = t.clone();
        }
        self.terms.push(t);
    }
}

fn initial_terms(spec: &RecurrenceSpec) -> Vec<BigUint> {
    if spec.is_lagonacci() {
        return [1u32, 2, 4, 3].iter().map(|&v| BigUint::from(v)).collect();
    }
    let order = spec.order();
    let s = spec.depth();
    let mut g: Vec<BigUint> = Vec::with_capacity(order);
    if s == 0 {
        g.push(BigUint::one());
        // H_{n+1} = c_1 H_n + ... + c_n H_1 + 1 for 1 <= n < L
        for n in 1..order {
            let mut acc = BigUint::one();
            for i in 1..=n {
                acc += &g[n - i] * spec.c(i);
            }
            g.push(acc);
        }
        return g;
    }
    for v in 1..=(s as u64 + 1) {
        g.push(BigUint::from(v));
    }
    let lead = spec.c(s + 1);
    for n in (s + 2)..=order {
        if lead <= s as u64 {
            g.push(BigUint::from(n as u64));
        } else {
            // c_{s+1} G_{n-s-1} + ... + c_{n-1} G_1 + 1
            let mut acc = BigUint::one();
            for j in (s + 1)..n {
                acc += &g[n - j - 1] * spec.c(j);
            }
            g.push(acc);
        }
    }
    g
}
