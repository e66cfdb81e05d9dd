use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable that overrides every cap with a single value.
pub const CAP_ENV_VAR: &str = "PARTITION_TOPOLOGY_CAP";

/// Upper bounds on `n` for the constructions whose size grows factorially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Brute-force enumeration of the symmetric group.
    pub beta: usize,
    /// Materialization of the pointed partition lattice and its subposets.
    pub poset: usize,
    /// Complexes `Δ_c`.
    pub delta: usize,
    /// Knapsack complexes `Λ`.
    pub lambda: usize,
    /// Order complexes of posets.
    pub order_complex: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { beta: 10, poset: 7, delta: 8, lambda: 7, order_complex: 6 }
    }
}

impl Caps {
    /// Same cap for every construction.
    pub fn uniform(n: usize) -> Self {
        Caps { beta: n, poset: n, delta: n, lambda: n, order_complex: n }
    }

    /// Defaults, unless the override variable holds a number.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAP_ENV_VAR) {
            Ok(raw) => raw
                .trim()
                .parse::<usize>()
                .map(Caps::uniform)
                .map_err(|_| Error::Parse(format!("{CAP_ENV_VAR}={raw:?} is not a number"))),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub(crate) fn check(n: usize, cap: usize, what: &'static str) -> Result<()> {
        if n > cap {
            Err(Error::CapExceeded { what, n, cap })
        } else {
            Ok(())
        }
    }
}
