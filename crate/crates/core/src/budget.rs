//! Enumeration budgets shared by the brute-force routines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BUDGET_ENV: &str = "WORDMAPLAB_BUDGET";

/// Upper limits on exhaustive work. Routines refuse to run past them rather
/// than silently sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Maximum number of group elements (or polynomial family members) enumerated.
    pub elements: u64,
    /// Maximum number of elementary pair operations (tuple evaluations, double loops).
    pub pair_ops: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            elements: 1_000_000,
            pair_ops: 1_000_000_000,
        }
    }
}

impl Budget {
    /// Reads `WORDMAPLAB_BUDGET`. Accepts either a bare integer (element budget)
    /// or a comma list such as `elements=2000000,pair_ops=5000000000`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(text) => Budget::parse(&text),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut budget = Budget::default();
        let text = text.trim();
        if let Ok(n) = text.parse::<u64>() {
            budget.elements = n;
            return Ok(budget);
        }
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("bad budget entry {part:?}")))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad budget value {value:?}")))?;
            match key.trim() {
                "elements" => budget.elements = value,
                "pair_ops" | "pairs" => budget.pair_ops = value,
                other => {
                    return Err(Error::InvalidArgument(format!("unknown budget key {other:?}")))
                }
            }
        }
        Ok(budget)
    }

    pub fn check_elements(&self, what: &str, required: u128) -> Result<()> {
        if required > self.elements as u128 {
            return Err(Error::budget(what, required, self.elements));
        }
        Ok(())
    }

    pub fn check_pairs(&self, what: &str, required: u128) -> Result<()> {
        if required > self.pair_ops as u128 {
            return Err(Error::budget(what, required, self.pair_ops));
        }
        Ok(())
    }
}
