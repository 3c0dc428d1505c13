//! The constructive greedy decomposition.
//!
//! At each stage the remainder `r` is either a term (emitted as a single
//! summand) or lies strictly inside a window `G_t <= r`. In the second case a
//! block is anchored at `t`: positions `i = s+1..L` sit at indices
//! `j = t - i + 1`, each takes `c_i` copies while the remainder allows, and the
//! first position that cannot take all of its copies takes as many as fit and
//! closes the block.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::legality::Decomposition;
use crate::sequence::SequenceHandle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreedyError {
    #[error("greedy step made no progress at remainder {remainder} (anchor {anchor})")]
    NonProgress { remainder: BigUint, anchor: usize },
    #[error("block anchored at {anchor} took every coefficient in full")]
    BlockOverflow { anchor: usize },
}

/// One stage of the greedy walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTrace {
    /// `t` for a block; the summand's own index when the remainder was a term.
    pub anchor: usize,
    /// True when the remainder was itself a term.
    pub term: bool,
    /// `(index, copies)` for every position the stage touched, zero copies included.
    pub taken: Vec<(usize, u64)>,
    /// Remainder after the stage.
    pub remainder: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub decomposition: Decomposition,
    pub trace: Vec<BlockTrace>,
}

/// Greedy decomposition of `n`. The trace is always recorded; it is a handful
/// of entries per call.
pub fn greedy_decompose(
    handle: &mut SequenceHandle,
    n: &BigUint,
) -> Result<GreedyOutcome, GreedyError> {
    handle.extend_until_exceeds(n);
    let spec = handle.spec().clone();
    let s = spec.depth();
    let order = spec.order();
    let mut decomposition = Decomposition::new();
    let mut trace = Vec::new();
    let mut r = n.clone();
    let mut last_top = usize::MAX;

    while !r.is_zero() {
        if let Some(idx) = handle.index_of(&r) {
            decomposition.add(idx, 1);
            trace.push(BlockTrace {
                anchor: idx,
                term: true,
                taken: alloc::vec![(idx, 1)],
                remainder: BigUint::zero(),
            });
            break;
        }
        let t = handle.top_index(&r);
        if t >= last_top {
            return Err(GreedyError::NonProgress {
                remainder: r,
                anchor: t,
            });
        }
        last_top = t;

        let before = r.clone();
        let mut taken = Vec::new();
        let mut closed = false;
        for i in (s + 1)..=order {
            if i > t {
                break;
            }
            let j = t - i + 1;
            let c = spec.c(i);
            let g = handle.term(j).clone();
            let fit = (&r / &g).to_u64().unwrap_or(u64::MAX);
            let copies = fit.min(c);
            if copies > 0 {
                r -= &g * copies;
                decomposition.add(j, copies);
            }
            taken.push((j, copies));
            if copies < c {
                closed = true;
                break;
            }
        }
        if !closed && t >= order {
            return Err(GreedyError::BlockOverflow { anchor: t });
        }
        if r == before {
            return Err(GreedyError::NonProgress {
                remainder: r,
                anchor: t,
            });
        }
        trace.push(BlockTrace {
            anchor: t,
            term: false,
            taken,
            remainder: r.clone(),
        });
    }
    Ok(GreedyOutcome {
        decomposition,
        trace,
    })
}
