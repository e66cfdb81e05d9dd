use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A pointed integer composition `(c₁,…,c_k)`: every part is positive except
/// the last, which may be zero.
///
/// Pointed compositions of `n` are in bijection with subsets of `[n]` through
/// their partial sums `{c₁, c₁+c₂, …, c₁+⋯+c_{k−1}}`; the refinement order
/// (covers merge adjacent parts) is reverse inclusion of those subsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PointedComposition {
    parts: Vec<usize>,
}

/// Row intervals `R_i` of a composition and the row intervals `K_j` of its
/// complement, both as 1-based inclusive ranges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalDecomposition {
    pub rows: Vec<RangeInclusive<usize>>,
    pub columns: Vec<RangeInclusive<usize>>,
}

impl PointedComposition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidComposition { parts, reason: "no parts" });
        }
        if parts[..parts.len() - 1].contains(&0) {
            return Err(Error::InvalidComposition { parts, reason: "only the last part may be zero" });
        }
        if parts.iter().sum::<usize>() == 0 {
            return Err(Error::InvalidComposition { parts, reason: "composition of zero" });
        }
        if parts.iter().sum::<usize>() > 64 {
            return Err(Error::InvalidComposition { parts, reason: "n above 64" });
        }
        Ok(PointedComposition { parts })
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(PointedComposition::new(parts.clone()).is_ok(), "{parts:?}");
        PointedComposition { parts }
    }

    /// The one-part composition `(n)`, top of the refinement order.
    pub fn top(n: usize) -> Self {
        PointedComposition { parts: vec![n] }
    }

    /// The composition `(1,…,1)` with `n` ones.
    pub fn ones(n: usize) -> Self {
        PointedComposition { parts: vec![1; n] }
    }

    /// Rebuilds a composition from its partial-sum set (bit `s−1` set for `s`).
    pub fn from_partial_sums(n: usize, mask: u64) -> Self {
        let mut parts = Vec::new();
        let mut last = 0;
        for s in super::mask_elements(mask) {
            debug_assert!(s <= n);
            parts.push(s - last);
            last = s;
        }
        parts.push(n - last);
        PointedComposition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts `k`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> usize {
        *self.parts.last().expect("compositions have at least one part")
    }

    pub fn has_positive_last(&self) -> bool {
        self.last() > 0
    }

    /// Partial-sum set as a bitmask over `[n]`.
    pub fn partial_sums(&self) -> u64 {
        let mut mask = 0u64;
        let mut acc = 0;
        for &p in &self.parts[..self.parts.len() - 1] {
            acc += p;
            mask |= 1u64 << (acc - 1);
        }
        mask
    }

    /// `self ≤ other` in the refinement order: `other` arises from `self` by
    /// merging adjacent parts.
    pub fn leq(&self, other: &PointedComposition) -> Result<bool> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch { left: self.n(), right: other.n() });
        }
        Ok(other.partial_sums() & !self.partial_sums() == 0)
    }

    fn require_positive_last(&self) -> Result<()> {
        if self.has_positive_last() {
            Ok(())
        } else {
            Err(Error::TrailingZero(self.to_string()))
        }
    }

    /// Complement in the interval `[(1,…,1), (n)]`: commas and plus signs swap.
    pub fn complement(&self) -> Result<PointedComposition> {
        self.require_positive_last()?;
        let n = self.n();
        let inner = super::full_mask(n - 1);
        Ok(PointedComposition::from_partial_sums(n, inner & !self.partial_sums()))
    }

    /// Consecutive row intervals `R_i` of sizes `c_i`; the last is empty when `c_k = 0`.
    pub fn rows(&self) -> Vec<RangeInclusive<usize>> {
        let mut start = 1;
        self.parts
            .iter()
            .map(|&p| {
                let r = start..=start + p - 1;
                start += p;
                r
            })
            .collect()
    }

    pub fn interval_decomposition(&self) -> Result<IntervalDecomposition> {
        let columns = self.complement()?.rows();
        Ok(IntervalDecomposition { rows: self.rows(), columns })
    }

    /// The pointed type `{c₁,…,c_{k−1}, c_k̲}`.
    pub fn pointed_type(&self) -> PointedIntegerPartition {
        let (&m, rest) = self.parts.split_last().expect("nonempty");
        PointedIntegerPartition::new(rest.to_vec(), m)
    }

    /// `Π cᵢ!`, the number of permutations mapping to a face of this type.
    pub fn multinomial_denominator(&self) -> u64 {
        self.parts.iter().map(|&p| super::factorial(p)).product()
    }

    /// All `2ⁿ` pointed compositions of `n`, ordered by partial-sum mask.
    pub fn all(n: usize) -> Vec<PointedComposition> {
        assert!((1..=20).contains(&n), "enumerating pointed compositions needs 1 ≤ n ≤ 20");
        (0..1u64 << n).map(|mask| PointedComposition::from_partial_sums(n, mask)).collect()
    }

    /// The `2ⁿ⁻¹` compositions of `n` with positive last part.
    pub fn all_positive(n: usize) -> Vec<PointedComposition> {
        PointedComposition::all(n).into_iter().filter(|c| c.has_positive_last()).collect()
    }

    /// Every `d ≥ self`, including `self`.
    pub fn coarsenings(&self) -> Vec<PointedComposition> {
        let n = self.n();
        let s = self.partial_sums();
        let mut out = Vec::new();
        let mut sub = s;
        loop {
            out.push(PointedComposition::from_partial_sums(n, sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & s;
        }
        out.sort();
        out
    }
}

impl fmt::Display for PointedComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().join(","))
    }
}

impl FromStr for PointedComposition {
    type Err = Error;

    /// Comma-separated parts, optionally wrapped in parentheses: `1,2,1` or `(1,2,1)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad composition part {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        PointedComposition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for PointedComposition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        PointedComposition::new(parts)
    }
}

impl From<PointedComposition> for Vec<usize> {
    fn from(c: PointedComposition) -> Self {
        c.parts
    }
}

/// A pointed integer partition `{λ, m̲}`: a multiset of positive parts plus a
/// non-negative pointed part. Parts are stored in weakly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointedIntegerPartition {
    pub lambda: Vec<usize>,
    pub m: usize,
}

impl PointedIntegerPartition {
    /// Sorts `lambda` descending. Zero parts are dropped.
    pub fn new(mut lambda: Vec<usize>, m: usize) -> Self {
        lambda.retain(|&p| p > 0);
        lambda.sort_unstable_by(|a, b| b.cmp(a));
        PointedIntegerPartition { lambda, m }
    }

    pub fn n(&self) -> usize {
        self.lambda.iter().sum::<usize>() + self.m
    }

    /// All pointed partitions of `n`.
    pub fn all(n: usize) -> Vec<PointedIntegerPartition> {
        let mut out = Vec::new();
        for m in 0..=n {
            for lambda in integer_partitions(n - m) {
                out.push(PointedIntegerPartition { lambda, m });
            }
        }
        out
    }
}

impl fmt::Display for PointedIntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.lambda.iter().map(|p| p.to_string()).collect();
        items.push(format!("_{}", self.m));
        write!(f, "{{{}}}", items.join(","))
    }
}

/// Integer partitions of `n` with parts in decreasing order.
pub(crate) fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}
