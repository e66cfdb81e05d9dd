use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::{PointedComposition, PointedIntegerPartition};
use crate::error::{Error, Result};

/// True iff all `(e₁+1)⋯(e_q+1)` sub-multiset sums of `lambda` are distinct.
pub fn is_knapsack(lambda: &[usize]) -> bool {
    let mut seen = BTreeSet::new();
    let counts = value_counts(lambda);
    let mut all_distinct = true;
    for_each_submultiset(&counts, &mut |_, sum| {
        if !seen.insert(sum) {
            all_distinct = false;
        }
    });
    all_distinct
}

/// Distinct values (descending) with multiplicities.
fn value_counts(lambda: &[usize]) -> Vec<(usize, usize)> {
    let mut sorted = lambda.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted.into_iter().dedup_with_count().map(|(e, v)| (v, e)).collect()
}

fn for_each_submultiset(counts: &[(usize, usize)], f: &mut dyn FnMut(&[usize], usize)) {
    fn go(counts: &[(usize, usize)], chosen: &mut Vec<usize>, sum: usize, f: &mut dyn FnMut(&[usize], usize)) {
        match counts.split_first() {
            None => f(chosen, sum),
            Some((&(value, mult), rest)) => {
                for k in 0..=mult {
                    chosen.extend(std::iter::repeat_n(value, k));
                    go(rest, chosen, sum + k * value, f);
                    chosen.truncate(chosen.len() - k);
                }
            }
        }
    }
    go(counts, &mut Vec::new(), 0, f);
}

/// A knapsack partition together with the unique sub-multiset behind every
/// attainable sum.
#[derive(Debug, Clone)]
pub struct Knapsack {
    lambda: Vec<usize>,
    representations: BTreeMap<usize, Vec<usize>>,
}

impl Knapsack {
    pub fn new(lambda: &[usize]) -> Result<Self> {
        let counts = value_counts(lambda);
        let mut representations = BTreeMap::new();
        let mut ok = true;
        for_each_submultiset(&counts, &mut |chosen, sum| {
            if sum > 0 && representations.insert(sum, chosen.to_vec()).is_some() {
                ok = false;
            }
        });
        let mut sorted = lambda.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        if !ok {
            return Err(Error::NotKnapsack(sorted));
        }
        Ok(Knapsack { lambda: sorted, representations })
    }

    /// Parts in decreasing order.
    pub fn lambda(&self) -> &[usize] {
        &self.lambda
    }

    /// The set `D` of non-zero sums of parts.
    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.representations.keys().copied()
    }

    /// The unique parts (descending) summing to `s`.
    pub fn representation(&self, s: usize) -> Result<&[usize]> {
        self.representations
            .get(&s)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::NotRepresentable { value: s, lambda: self.lambda.clone() })
    }

    /// `κ(s)`: the smallest part in the representation of `s`.
    pub fn kappa(&self, s: usize) -> Result<usize> {
        Ok(*self.representation(s)?.last().expect("representations of nonzero sums are nonempty"))
    }

    /// Whether `s` is a sum of parts with pairwise distinct values.
    pub fn is_distinct_sum(&self, s: usize) -> bool {
        self.representations.get(&s).is_some_and(|r| r.iter().all_unique())
    }

    fn partition_label(&self, m: usize) -> String {
        PointedIntegerPartition::new(self.lambda.clone(), m).to_string()
    }

    /// `V(λ, m̲)`: compositions `(d₁,…,d_{r−1}, m)` where the `dᵢ` are sums of
    /// distinct-valued groups that together use every part of `λ` once.
    pub fn v_set(&self, m: usize) -> Vec<PointedComposition> {
        fn go(rest: &[(usize, usize)], prefix: &mut Vec<usize>, m: usize, out: &mut BTreeSet<Vec<usize>>) {
            if rest.iter().all(|&(_, c)| c == 0) {
                let mut parts = prefix.clone();
                parts.push(m);
                out.insert(parts);
                return;
            }
            let present: Vec<usize> = (0..rest.len()).filter(|&i| rest[i].1 > 0).collect();
            for size in 1..=present.len() {
                for group in present.iter().copied().combinations(size) {
                    let mut next = rest.to_vec();
                    let mut sum = 0;
                    for &i in &group {
                        next[i].1 -= 1;
                        sum += next[i].0;
                    }
                    prefix.push(sum);
                    go(&next, prefix, m, out);
                    prefix.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(&value_counts(&self.lambda), &mut Vec::new(), m, &mut out);
        out.into_iter().filter(|p| p.iter().sum::<usize>() > 0).map(PointedComposition::from_parts_unchecked).collect()
    }

    /// The representations of `d₁,…,d_{r−1}` if `d ∈ V(λ, m̲)`.
    fn split_blocks(&self, d: &PointedComposition, m: usize) -> Result<Vec<&[usize]>> {
        let not_in_v = || Error::NotInV { composition: d.to_string(), partition: self.partition_label(m) };
        let (&last, head) = d.parts().split_last().expect("nonempty");
        if last != m {
            return Err(not_in_v());
        }
        let mut blocks = Vec::with_capacity(head.len());
        let mut used = Vec::new();
        for &di in head {
            if !self.is_distinct_sum(di) {
                return Err(not_in_v());
            }
            let rep = self.representation(di)?;
            used.extend_from_slice(rep);
            blocks.push(rep);
        }
        used.sort_unstable_by(|a, b| b.cmp(a));
        if used != self.lambda {
            return Err(not_in_v());
        }
        Ok(blocks)
    }

    pub fn contains_in_v(&self, d: &PointedComposition, m: usize) -> bool {
        self.split_blocks(d, m).is_ok()
    }

    /// `ε(d)`: each `dᵢ` replaced by its parts in decreasing order.
    pub fn epsilon(&self, d: &PointedComposition, m: usize) -> Result<PointedComposition> {
        let blocks = self.split_blocks(d, m)?;
        let mut parts: Vec<usize> = blocks.into_iter().flatten().copied().collect();
        parts.push(m);
        Ok(PointedComposition::from_parts_unchecked(parts))
    }

    /// `W(d)` with the sign `(−1)^c` of the block-wise rearrangement taking
    /// `ε(d)` to `c`. Sorted by composition.
    pub fn w_set(&self, d: &PointedComposition, m: usize) -> Result<Vec<(PointedComposition, i64)>> {
        let blocks = self.split_blocks(d, m)?;
        let per_block: Vec<Vec<(Vec<usize>, i64)>> = blocks
            .iter()
            .map(|block| {
                (0..block.len())
                    .permutations(block.len())
                    .map(|order| {
                        let inversions = (0..order.len())
                            .flat_map(|i| (i + 1..order.len()).map(move |j| (i, j)))
                            .filter(|&(i, j)| order[i] > order[j])
                            .count();
                        let sign = if inversions % 2 == 0 { 1 } else { -1 };
                        (order.iter().map(|&i| block[i]).collect(), sign)
                    })
                    .collect()
            })
            .collect();
        let mut out: Vec<(PointedComposition, i64)> = per_block
            .into_iter()
            .multi_cartesian_product()
            .map(|choice| {
                let sign = choice.iter().map(|(_, s)| s).product();
                let mut parts: Vec<usize> = choice.into_iter().flat_map(|(p, _)| p).collect();
                parts.push(m);
                (PointedComposition::from_parts_unchecked(parts), sign)
            })
            .collect();
        if out.is_empty() {
            // no blocks at all: d = (m)
            out.push((d.clone(), 1));
        }
        out.sort();
        Ok(out)
    }
}
