//! Machine-readable output shapes. Values and N are decimal strings; term
//! indices and multiplicities are plain numbers.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use zecklab_core::{BlockTrace, Decomposition, SequenceHandle};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub index: usize,
    pub mult: u64,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub anchor: usize,
    pub term: bool,
    pub taken: Vec<Summand>,
    pub remainder: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub n: String,
    pub summands: Vec<Summand>,
    pub legal: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub derivation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<TraceStep>>,
}

pub fn summands(d: &Decomposition, handle: &mut SequenceHandle) -> Vec<Summand> {
    d.iter()
        .map(|(index, mult)| Summand {
            index,
            mult,
            value: handle.term(index).to_string(),
        })
        .collect()
}

pub fn trace_steps(trace: &[BlockTrace], handle: &mut SequenceHandle) -> Vec<TraceStep> {
    trace
        .iter()
        .map(|b| TraceStep {
            anchor: b.anchor,
            term: b.term,
            taken: b
                .taken
                .iter()
                .map(|&(index, mult)| Summand {
                    index,
                    mult,
                    value: handle.term(index).to_string(),
                })
                .collect(),
            remainder: b.remainder.to_string(),
        })
        .collect()
}

/// The decomposition a JSON object describes.
pub fn decomposition_of(json: &DecompositionJson) -> Decomposition {
    Decomposition::from_pairs(json.summands.iter().map(|s| (s.index, s.mult)))
}

/// `2*G_8 + G_7` and `2*56 + 32` renderings.
pub fn render_sum(d: &Decomposition, handle: &mut SequenceHandle) -> (String, String) {
    if d.is_empty() {
        return ("0".into(), "0".into());
    }
    let mut symbolic = Vec::new();
    let mut numeric = Vec::new();
    for (index, mult) in d.iter() {
        let value: BigUint = handle.term(index).clone();
        if mult == 1 {
            symbolic.push(format!("G_{index}"));
            numeric.push(value.to_string());
        } else {
            symbolic.push(format!("{mult}*G_{index}"));
            numeric.push(format!("{mult}*{value}"));
        }
    }
    (symbolic.join(" + "), numeric.join(" + "))
}
