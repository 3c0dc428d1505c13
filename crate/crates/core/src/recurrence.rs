//! Recurrence relations: parsing, validation and classification.
//!
//! A recurrence is stored as its coefficient list `c_1, ..., c_L`. The depth
//! `s` (number of leading zero coefficients) and the kind are always derived
//! from the coefficients, never supplied separately.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("empty recurrence")]
    EmptyInput,
    #[error("not a non-negative integer: {0:?}")]
    NonIntegerToken(String),
    #[error("last coefficient must be positive")]
    TrailingZero,
    #[error("all coefficients are zero")]
    AllZero,
    #[error("degenerate recurrence: indices of nonzero coefficients share the factor {0}")]
    Degenerate(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecurrenceKind {
    /// Positive leading coefficient (depth 0).
    Plrr,
    /// At least one leading zero coefficient.
    Zlrr,
}

/// A validated recurrence `G(n+1) = c_1 G(n) + ... + c_L G(n+1-L)`.
///
/// Invariants: `L >= 1`, `c_L > 0`, `c_{s+1} > 0` where `s` is the number of
/// leading zeros, and the indices of the nonzero coefficients have gcd 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecurrenceSpec {
    coefficients: Vec<u64>,
    depth: usize,
    support: Vec<usize>,
}

impl RecurrenceSpec {
    pub fn new(coefficients: Vec<u64>) -> Result<Self, RecurrenceError> {
        if coefficients.is_empty() {
            return Err(RecurrenceError::EmptyInput);
        }
        if coefficients.iter().all(|&c| c == 0) {
            return Err(RecurrenceError::AllZero);
        }
        if *coefficients.last().unwrap() == 0 {
            return Err(RecurrenceError::TrailingZero);
        }
        let depth = coefficients.iter().take_while(|&&c| c == 0).count();
        let support: Vec<usize> = coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i + 1)
            .collect();
        let g = support.iter().fold(0, |acc, &m| gcd(acc, m));
        if g != 1 {
            return Err(RecurrenceError::Degenerate(g));
        }
        Ok(RecurrenceSpec {
            coefficients,
            depth,
            support,
        })
    }

    /// Coefficients `c_1..c_L` (0-based slice: `coefficients()[i - 1] == c_i`).
    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    /// `c_i` for `1 <= i <= L`, zero outside that range.
    pub fn c(&self, i: usize) -> u64 {
        if i == 0 || i > self.coefficients.len() {
            0
        } else {
            self.coefficients[i - 1]
        }
    }

    /// Number of leading zero coefficients `s`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Length `L` of the coefficient list.
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn kind(&self) -> RecurrenceKind {
        if self.depth == 0 {
            RecurrenceKind::Plrr
        } else {
            RecurrenceKind::Zlrr
        }
    }

    pub fn is_plrr(&self) -> bool {
        self.depth == 0
    }

    /// Indices `m` with `c_m != 0`.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Largest coefficient, or 1 if all are smaller. Bounds every multiplicity
    /// a legal decomposition can use.
    pub fn max_multiplicity(&self) -> u64 {
        self.coefficients.iter().copied().max().unwrap_or(0).max(1)
    }

    pub fn is_lagonacci(&self) -> bool {
        self.coefficients == [0, 1, 1]
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for RecurrenceSpec {
    type Err = RecurrenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_recurrence(s)
    }
}

/// Parses `"c1,c2,...,cL"`. Whitespace around tokens is ignored.
pub fn parse_recurrence(text: &str) -> Result<RecurrenceSpec, RecurrenceError> {
    if text.trim().is_empty() {
        return Err(RecurrenceError::EmptyInput);
    }
    let coefficients = text
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
                return Err(RecurrenceError::NonIntegerToken(tok.to_string()));
            }
            tok.parse::<u64>()
                .map_err(|_| RecurrenceError::NonIntegerToken(tok.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    RecurrenceSpec::new(coefficients)
}

/// Which of the uniqueness results a recurrence falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TheoremFlags {
    /// `s >= 1`, `c_{s+1} > s`, `c_{s+2} > 0` and `c_L > 1`: uniqueness is provably lost.
    pub thm113_applicable: bool,
    /// `s >= 1` and `c_{s+1} > s`: uniqueness is conjectured to be lost.
    pub conj114_applicable: bool,
    /// `Some(c)` when the coefficients are exactly `(0, 0, 1, c)`.
    pub conj115_shape: Option<u64>,
    /// Coefficients are exactly `(0, 1, 1)`.
    pub lagonacci: bool,
}

pub fn classify(spec: &RecurrenceSpec) -> TheoremFlags {
    let s = spec.depth();
    let lead = spec.c(s + 1);
    let zero_kind = s >= 1;
    let conj114 = zero_kind && lead > s as u64;
    let thm113 = conj114 && spec.order() >= s + 2 && spec.c(s + 2) > 0 && spec.c(spec.order()) > 1;
    let conj115_shape = match spec.coefficients() {
        [0, 0, 1, c] => Some(*c),
        _ => None,
    };
    TheoremFlags {
        thm113_applicable: thm113,
        conj114_applicable: conj114,
        conj115_shape,
        lagonacci: spec.is_lagonacci(),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn parses_depth_and_kind() {
        let spec = parse_recurrence("0,2,2").unwrap();
        assert_eq!(spec.depth(), 1);
        assert_eq!(spec.order(), 3);
        assert_eq!(spec.kind(), RecurrenceKind::Zlrr);

        let fib = parse_recurrence("1,1").unwrap();
        assert_eq!(fib.depth(), 0);
        assert_eq!(fib.order(), 2);
        assert_eq!(fib.kind(), RecurrenceKind::Plrr);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert_eq!(
            parse_recurrence("0,1,0,1"),
            Err(RecurrenceError::Degenerate(2))
        );
        assert_eq!(
            parse_recurrence("0,2,0"),
            Err(RecurrenceError::TrailingZero)
        );
        assert_eq!(parse_recurrence(""), Err(RecurrenceError::EmptyInput));
        assert_eq!(parse_recurrence("  "), Err(RecurrenceError::EmptyInput));
        assert_eq!(parse_recurrence("0,0"), Err(RecurrenceError::AllZero));
        assert!(matches!(
            parse_recurrence("1,x"),
            Err(RecurrenceError::NonIntegerToken(_))
        ));
        assert!(matches!(
            parse_recurrence("1,,1"),
            Err(RecurrenceError::NonIntegerToken(_))
        ));
        assert!(matches!(
            parse_recurrence("1,-1"),
            Err(RecurrenceError::NonIntegerToken(_))
        ));
        // singleton support {L} with L > 1
        assert_eq!(
            parse_recurrence("0,0,3"),
            Err(RecurrenceError::Degenerate(3))
        );
    }

    #[test]
    fn accepts_length_one_and_spaces() {
        let spec = parse_recurrence("2").unwrap();
        assert_eq!(spec.order(), 1);
        assert!(spec.is_plrr());
        let spaced = parse_recurrence(" 0 , 2, 2 ").unwrap();
        assert_eq!(spaced.coefficients(), &[0, 2, 2]);
    }

    #[test]
    fn classification_examples() {
        let f = classify(&parse_recurrence("0,2,1,2").unwrap());
        assert!(f.thm113_applicable && f.conj114_applicable);

        let f = classify(&parse_recurrence("0,1,1").unwrap());
        assert!(!f.thm113_applicable && !f.conj114_applicable && f.lagonacci);

        let f = classify(&parse_recurrence("0,0,1,4").unwrap());
        assert_eq!(f.conj115_shape, Some(4));
        assert!(!f.conj114_applicable);

        // positive recurrences are outside the zero-depth theorems
        let f = classify(&parse_recurrence("3,2,4").unwrap());
        assert!(!f.thm113_applicable && !f.conj114_applicable);

        // c_{s+2} must exist
        let f = classify(&parse_recurrence("0,3,1").unwrap());
        assert!(f.conj114_applicable && !f.thm113_applicable);
        let f = classify(&parse_recurrence("0,0,3,2").unwrap());
        assert!(f.thm113_applicable);
    }

    fn reference_valid(c: &[u64]) -> bool {
        if c.is_empty() || *c.last().unwrap() == 0 {
            return false;
        }
        let idx: Vec<usize> = (1..=c.len()).filter(|&i| c[i - 1] != 0).collect();
        // brute-force gcd: largest d dividing every index
        let max = *idx.iter().max().unwrap();
        let g = (1..=max)
            .rev()
            .find(|d| idx.iter().all(|i| i % d == 0))
            .unwrap();
        g == 1
    }

    proptest! {
        #[test]
        fn parse_matches_definition(c in proptest::collection::vec(0u64..4, 1..7)) {
            let text = c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let parsed = parse_recurrence(&text);
            prop_assert_eq!(parsed.is_ok(), reference_valid(&c));
            if let Ok(spec) = parsed {
                let s = c.iter().take_while(|&&x| x == 0).count();
                prop_assert_eq!(spec.depth(), s);
                prop_assert!(spec.c(s + 1) > 0);
                prop_assert_eq!(spec.kind() == RecurrenceKind::Plrr, s == 0);
                let again = parse_recurrence(&spec.to_string()).unwrap();
                prop_assert_eq!(again, spec);
                let f = classify(&parse_recurrence(&text).unwrap());
                prop_assert!(!f.thm113_applicable || f.conj114_applicable);
                if f.conj115_shape.is_some() {
                    prop_assert_eq!(c.len(), 4);
                    prop_assert_eq!(s, 2);
                }
            }
        }
    }

    #[test]
    fn support_lists_nonzero_indices() {
        let spec = RecurrenceSpec::new(vec![0, 3, 0, 2]).unwrap_err();
        assert_eq!(spec, RecurrenceError::Degenerate(2));
        let spec = RecurrenceSpec::new(vec![0, 3, 0, 0, 2]).unwrap();
        assert_eq!(spec.support(), &[2, 5]);
    }
}
