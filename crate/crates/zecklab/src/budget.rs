//! Enumeration budgets from the environment.
//!
//! `ZECKLAB_BUDGET` is either a bare integer (the largest N for grammar
//! enumeration) or comma-separated `key=value` pairs with keys `max_n`,
//! `oracle` and `nodes`, e.g. `max_n=2000000,oracle=800`.

use zecklab_core::Budget;

pub const BUDGET_VAR: &str = "ZECKLAB_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid {BUDGET_VAR} value {value:?}: {why}")]
pub struct BudgetError {
    pub value: String,
    pub why: String,
}

pub fn parse_budget(text: &str, base: Budget) -> Result<Budget, BudgetError> {
    let err = |why: &str| BudgetError {
        value: text.to_string(),
        why: why.to_string(),
    };
    let text = text.trim();
    if let Ok(n) = text.parse::<u64>() {
        return Ok(Budget { max_n: n, ..base });
    }
    let mut budget = base;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| err("expected key=value"))?;
        let value: u64 = value
            .trim()
            .parse()
            .map_err(|_| err("value is not a non-negative integer"))?;
        match key.trim() {
            "max_n" => budget.max_n = value,
            "oracle" => budget.oracle_max_n = value,
            "nodes" => budget.max_nodes = value,
            other => return Err(err(&format!("unknown key {other:?}"))),
        }
    }
    Ok(budget)
}

/// Default budget with any `ZECKLAB_BUDGET` override applied.
pub fn budget_from_env() -> Result<Budget, BudgetError> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => parse_budget(&v, Budget::default()),
        Err(_) => Ok(Budget::default()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let base = Budget::default();
        assert_eq!(parse_budget("42", base).unwrap().max_n, 42);
        let b = parse_budget("oracle=9, nodes=100", base).unwrap();
        assert_eq!((b.max_n, b.oracle_max_n, b.max_nodes), (base.max_n, 9, 100));
        assert!(parse_budget("depth=3", base).is_err());
        assert!(parse_budget("max_n=-1", base).is_err());
    }
}
