//! Grid descriptors for `probe`.
//!
//! A grid is written `s=A..B;k=A..B;c=A..B` where `k` is `L - s` (the number of
//! coefficients after the leading zeros) and `c` bounds every coefficient.
//! Keys may appear in any order; a single value `s=2` means `s=2..2`.

use std::ops::RangeInclusive;

use zecklab_core::FamilyGrid;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid grid {text:?}: {why}")]
pub struct GridError {
    pub text: String,
    pub why: String,
}

fn range<T: std::str::FromStr + PartialOrd + Copy>(text: &str) -> Option<RangeInclusive<T>> {
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (
            lo.trim().parse().ok()?,
            hi.trim_start_matches('=').trim().parse().ok()?,
        ),
        None => {
            let v = text.trim().parse().ok()?;
            (v, v)
        }
    };
    (lo <= hi).then_some(lo..=hi)
}

pub fn parse_grid(text: &str) -> Result<FamilyGrid, GridError> {
    let err = |why: String| GridError {
        text: text.to_string(),
        why,
    };
    let (mut depth, mut width, mut coefficients) = (None, None, None);
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| err(format!("{part:?} is not key=range")))?;
        let bad = || err(format!("bad range {value:?}"));
        match key.trim() {
            "s" => depth = Some(range::<usize>(value).ok_or_else(bad)?),
            "k" => width = Some(range::<usize>(value).ok_or_else(bad)?),
            "c" => coefficients = Some(range::<u64>(value).ok_or_else(bad)?),
            other => return Err(err(format!("unknown key {other:?}"))),
        }
    }
    Ok(FamilyGrid {
        depth: depth.ok_or_else(|| err("missing s".into()))?,
        width: width.ok_or_else(|| err("missing k".into()))?,
        coefficients: coefficients.ok_or_else(|| err("missing c".into()))?,
    })
}
