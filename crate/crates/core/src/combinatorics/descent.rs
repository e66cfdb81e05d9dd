use std::collections::HashMap;

use super::{Permutation, PointedComposition};
use crate::caps::Caps;
use crate::error::Result;

/// `β(c)`: the number of permutations with descent composition `c`, by
/// exhaustive enumeration of `S_n`. A trailing zero gives 0, except for the
/// degenerate one-part case.
pub fn beta(c: &PointedComposition, caps: &Caps) -> Result<u64> {
    if !c.has_positive_last() {
        return Ok(if c.len() == 1 { 1 } else { 0 });
    }
    Caps::check(c.n(), caps.beta, "descent enumeration")?;
    let target = c.partial_sums();
    Ok(Permutation::all(c.n()).filter(|a| a.descent_composition().partial_sums() == target).count() as u64)
}

/// `Σ_{d ∈ ds} β(d)`.
pub fn beta_sum<'a>(ds: impl IntoIterator<Item = &'a PointedComposition>, caps: &Caps) -> Result<u64> {
    let mut total = 0;
    for d in ds {
        total += beta(d, caps)?;
    }
    Ok(total)
}

/// Histogram of descent sets over all of `S_n`, for repeated `β` lookups.
#[derive(Debug, Clone)]
pub struct DescentTable {
    n: usize,
    counts: HashMap<u64, u64>,
}

impl DescentTable {
    pub fn new(n: usize, caps: &Caps) -> Result<Self> {
        Caps::check(n, caps.beta, "descent enumeration")?;
        let mut counts = HashMap::new();
        for a in Permutation::all(n) {
            *counts.entry(a.descent_composition().partial_sums()).or_insert(0) += 1;
        }
        Ok(DescentTable { n, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self, c: &PointedComposition) -> u64 {
        assert_eq!(c.n(), self.n, "composition of the wrong size for this table");
        if !c.has_positive_last() {
            return if c.len() == 1 { 1 } else { 0 };
        }
        self.counts.get(&c.partial_sums()).copied().unwrap_or(0)
    }
}
