use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use super::Face;
use crate::combinatorics::{full_mask, mask_elements, mask_of, Permutation, PointedComposition};
use crate::error::{Error, Result};
use crate::poset::PointedSetPartition;

/// An ordered set partition `(C₁,…,C_m)` of `[n]`: disjoint blocks covering
/// `[n]`, all non-empty except possibly the last. As a face of `Δ_n` it has
/// dimension `m − 2`; the one-block partition `([n])` is the empty face.
///
/// Blocks are bitmasks over `[n]` (bit `i−1` for element `i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedSetPartition {
    n: usize,
    blocks: Vec<u64>,
}

impl OrderedSetPartition {
    pub fn new(n: usize, blocks: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidOrderedPartition(format!("ground set size {n} outside 1..=64")));
        }
        if blocks.is_empty() {
            return Err(Error::InvalidOrderedPartition("no blocks".into()));
        }
        if blocks[..blocks.len() - 1].contains(&0) {
            return Err(Error::InvalidOrderedPartition("only the last block may be empty".into()));
        }
        let mut union = 0u64;
        for &b in &blocks {
            if union & b != 0 {
                return Err(Error::InvalidOrderedPartition("blocks overlap".into()));
            }
            union |= b;
        }
        if union != full_mask(n) {
            return Err(Error::InvalidOrderedPartition(format!("blocks do not cover [{n}]")));
        }
        Ok(OrderedSetPartition { n, blocks })
    }

    pub(crate) fn from_blocks_unchecked(n: usize, blocks: Vec<u64>) -> Self {
        debug_assert!(OrderedSetPartition::new(n, blocks.clone()).is_ok());
        OrderedSetPartition { n, blocks }
    }

    /// Blocks given as lists of 1-based elements.
    pub fn from_sets(n: usize, sets: &[Vec<usize>]) -> Result<Self> {
        if sets.iter().flatten().any(|&x| x == 0 || x > n) {
            return Err(Error::InvalidOrderedPartition(format!("element outside [{n}]")));
        }
        let total: usize = sets.iter().map(Vec::len).sum();
        if total != n {
            return Err(Error::InvalidOrderedPartition("element repeated or missing".into()));
        }
        OrderedSetPartition::new(n, sets.iter().map(|s| mask_of(s.iter().copied())).collect())
    }

    /// The empty face `([n])`.
    pub fn whole(n: usize) -> Self {
        OrderedSetPartition { n, blocks: vec![full_mask(n)] }
    }

    /// The face spanned by a chain of vertices, each vertex given by its
    /// first block `A` (the vertex is `(A, [n]∖A)`).
    pub fn from_vertex_chain(n: usize, chain: &[u64]) -> Result<Self> {
        let mut sorted = chain.to_vec();
        sorted.sort_by_key(|a| a.count_ones());
        let mut blocks = Vec::with_capacity(sorted.len() + 1);
        let mut prev = 0u64;
        for &a in &sorted {
            if a & prev != prev || a == prev || a & !full_mask(n) != 0 {
                return Err(Error::InvalidOrderedPartition("vertex set is not a chain".into()));
            }
            blocks.push(a & !prev);
            prev = a;
        }
        blocks.push(full_mask(n) & !prev);
        OrderedSetPartition::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    /// Number of blocks `m`.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_elements(&self, i: usize) -> Vec<usize> {
        mask_elements(self.blocks[i]).collect()
    }

    /// The composition of block sizes.
    pub fn type_composition(&self) -> PointedComposition {
        PointedComposition::from_parts_unchecked(self.blocks.iter().map(|b| b.count_ones() as usize).collect())
    }

    /// Forget the order of `C₁,…,C_{m−1}` and point the last block.
    pub fn pointed_partition(&self) -> PointedSetPartition {
        let (&z, rest) = self.blocks.split_last().expect("nonempty");
        PointedSetPartition::from_masks_unchecked(self.n, rest.to_vec(), z)
    }

    /// Merge blocks `i` and `i+1` (0-based).
    pub fn merge(&self, i: usize) -> OrderedSetPartition {
        let mut blocks = self.blocks.clone();
        let next = blocks.remove(i + 1);
        blocks[i] |= next;
        OrderedSetPartition { n: self.n, blocks }
    }

    /// Replace block `i` (0-based) by the two blocks `part`, `block ∖ part`.
    pub fn split(&self, i: usize, part: u64) -> OrderedSetPartition {
        debug_assert!(part & !self.blocks[i] == 0);
        let mut blocks = self.blocks.clone();
        blocks[i] &= !part;
        blocks.insert(i, part);
        OrderedSetPartition::from_blocks_unchecked(self.n, blocks)
    }

    /// `ω · τ`: every element `x` replaced by `ω(x)`.
    pub fn relabel(&self, omega: &Permutation) -> OrderedSetPartition {
        assert_eq!(omega.len(), self.n, "permutation of the wrong size");
        let blocks = self.blocks.iter().map(|&b| mask_of(mask_elements(b).map(|x| omega.apply(x)))).collect();
        OrderedSetPartition { n: self.n, blocks }
    }

    /// Ordered set partitions of `[n]` with block sizes `parts` (in order).
    pub fn all_of_type(parts: &PointedComposition) -> Vec<OrderedSetPartition> {
        fn go(n: usize, parts: &[usize], free: u64, prefix: &mut Vec<u64>, out: &mut Vec<OrderedSetPartition>) {
            match parts.split_first() {
                None => out.push(OrderedSetPartition { n, blocks: prefix.clone() }),
                Some((&p, rest)) => {
                    for chosen in mask_elements(free).combinations(p) {
                        let b = mask_of(chosen);
                        prefix.push(b);
                        go(n, rest, free & !b, prefix, out);
                        prefix.pop();
                    }
                }
            }
        }
        let n = parts.n();
        let mut out = Vec::new();
        go(n, parts.parts(), full_mask(n), &mut Vec::new(), &mut out);
        out
    }
}

impl Face for OrderedSetPartition {
    /// First block `A` of the vertex `(A, [n]∖A)`.
    type Vertex = u64;

    fn dim(&self) -> isize {
        self.blocks.len() as isize - 2
    }

    /// `∂(C₁,…,C_r) = Σ (−1)^{i−1} (C₁,…,Cᵢ∪Cᵢ₊₁,…,C_r)`.
    fn boundary_terms(&self) -> Vec<(Self, i64)> {
        (0..self.blocks.len().saturating_sub(1)).map(|i| (self.merge(i), if i % 2 == 0 { 1 } else { -1 })).collect()
    }

    fn vertices(&self) -> Vec<u64> {
        let mut acc = 0u64;
        let mut out: Vec<u64> = self.blocks[..self.blocks.len() - 1]
            .iter()
            .map(|&b| {
                acc |= b;
                acc
            })
            .collect();
        out.sort_unstable();
        out
    }
}

fn write_block(f: &mut fmt::Formatter<'_>, n: usize, mask: u64) -> fmt::Result {
    let sep = if n > 9 { " " } else { "" };
    write!(f, "{}", mask_elements(mask).join(sep))
}

impl fmt::Display for OrderedSetPartition {
    /// Blocks separated by `-`, e.g. `2-14-3`; a trailing empty block shows
    /// as a trailing `-`. Elements are space-separated when `n > 9`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "-")?;
            }
            write_block(f, self.n, b)?;
        }
        Ok(())
    }
}

/// Elements of one block: single digits run together (`146`), or
/// whitespace/comma separated when `spaced` (`1 4 10`).
pub(crate) fn parse_block(raw: &str, spaced: bool) -> Result<Vec<usize>> {
    let raw = raw.trim();
    let tokens: Vec<String> = if spaced {
        raw.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(str::to_owned).collect()
    } else {
        raw.chars().map(String::from).collect()
    };
    tokens.iter().map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad element {t:?} in {raw:?}")))).collect()
}

impl FromStr for OrderedSetPartition {
    type Err = Error;

    /// Inverse of `Display`. Blocks of single digits may be written without
    /// spaces; larger elements must be space-separated.
    fn from_str(s: &str) -> Result<Self> {
        let spaced = s.trim().contains(|c: char| c.is_whitespace() || c == ',');
        let sets = s.split('-').map(|b| parse_block(b, spaced)).collect::<Result<Vec<_>>>()?;
        let n = sets.iter().map(Vec::len).sum();
        OrderedSetPartition::from_sets(n, &sets)
    }
}
