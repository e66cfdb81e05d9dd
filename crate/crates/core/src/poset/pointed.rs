use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use super::FinitePoset;
use crate::caps::Caps;
use crate::combinatorics::{full_mask, mask_elements, mask_of, Knapsack, PointedComposition, PointedIntegerPartition};
use crate::complex::parse_block;
use crate::error::{Error, Result};

/// A pointed set partition of `[n]`: unordered non-empty blocks together
/// with a distinguished, possibly empty, block `Z`.
///
/// Canonical form: blocks are bitmasks sorted by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointedSetPartition {
    n: usize,
    blocks: Vec<u64>,
    zero: u64,
}

impl PointedSetPartition {
    pub fn new(n: usize, blocks: Vec<u64>, zero: u64) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidPointedPartition(format!("ground set size {n} outside 1..=64")));
        }
        let mut union = zero;
        for &b in &blocks {
            if b == 0 {
                return Err(Error::InvalidPointedPartition("empty block".into()));
            }
            if union & b != 0 {
                return Err(Error::InvalidPointedPartition("blocks overlap".into()));
            }
            union |= b;
        }
        if union != full_mask(n) {
            return Err(Error::InvalidPointedPartition(format!("blocks do not cover [{n}]")));
        }
        Ok(Self::from_masks_unchecked(n, blocks, zero))
    }

    pub(crate) fn from_masks_unchecked(n: usize, mut blocks: Vec<u64>, zero: u64) -> Self {
        blocks.sort_unstable_by_key(|b| b.trailing_zeros());
        PointedSetPartition { n, blocks, zero }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn zero_set(&self) -> u64 {
        self.zero
    }

    /// `{|B₁|,…,|B_k|, |Z|̲}`.
    pub fn pointed_type(&self) -> PointedIntegerPartition {
        PointedIntegerPartition::new(
            self.blocks.iter().map(|b| b.count_ones() as usize).collect(),
            self.zero.count_ones() as usize,
        )
    }

    /// Every block of `self` lies in a block of `other` or in its `Z`, and
    /// `Z_self ⊆ Z_other`.
    pub fn leq(&self, other: &PointedSetPartition) -> bool {
        self.n == other.n
            && self.zero & !other.zero == 0
            && self.blocks.iter().all(|&b| b & !other.zero == 0 || other.blocks.iter().any(|&c| b & !c == 0))
    }

    /// All pointed set partitions of `[n]`, via partitions of `[n+1]` where
    /// the block of `n+1` minus that element is `Z`.
    pub fn all(n: usize) -> Vec<PointedSetPartition> {
        set_partitions(n + 1)
            .into_iter()
            .map(|blocks| {
                let marker = 1u64 << n;
                let zero = blocks.iter().find(|&&b| b & marker != 0).expect("some block holds n+1") & !marker;
                let rest = blocks.into_iter().filter(|&b| b & marker == 0).collect();
                PointedSetPartition::from_masks_unchecked(n, rest, zero)
            })
            .collect()
    }
}

/// Set partitions of `[size]` as lists of block masks.
pub(crate) fn set_partitions(size: usize) -> Vec<Vec<u64>> {
    fn go(i: usize, size: usize, blocks: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == size {
            out.push(blocks.clone());
            return;
        }
        for j in 0..blocks.len() {
            blocks[j] |= 1 << i;
            go(i + 1, size, blocks, out);
            blocks[j] &= !(1 << i);
        }
        blocks.push(1 << i);
        go(i + 1, size, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, size, &mut Vec::new(), &mut out);
    out
}

fn block_string(n: usize, mask: u64) -> String {
    mask_elements(mask).join(if n > 9 { " " } else { "" })
}

impl fmt::Display for PointedSetPartition {
    /// `1358|4|_267`: the pointed block comes last after `_`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{}|", block_string(self.n, *b))?;
        }
        write!(f, "_{}", block_string(self.n, self.zero))
    }
}

impl FromStr for PointedSetPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut zero = Vec::new();
        let spaced = s.trim().contains(|c: char| c.is_whitespace() || c == ',');
        for token in s.trim().split('|') {
            if let Some(rest) = token.trim().strip_prefix('_') {
                zero = parse_block(rest, spaced)?;
            } else {
                blocks.push(parse_block(token, spaced)?);
            }
        }
        let n = blocks.iter().map(Vec::len).sum::<usize>() + zero.len();
        if blocks.iter().chain(std::iter::once(&zero)).flatten().any(|&x| x == 0 || x > n) {
            return Err(Error::InvalidPointedPartition(format!("{s:?} is not a partition of [{n}]")));
        }
        PointedSetPartition::new(n, blocks.iter().map(|b| mask_of(b.iter().copied())).collect(), mask_of(zero))
    }
}

/// A subposet of `Π•_n` with its elements in poset index order.
#[derive(Clone, Debug)]
pub struct PartitionPoset {
    pub elements: Vec<PointedSetPartition>,
    pub poset: FinitePoset,
}

impl PartitionPoset {
    fn from_elements(elements: Vec<PointedSetPartition>) -> Self {
        let labels = elements.iter().map(|e| e.to_string()).collect();
        let (poset, new_index) =
            FinitePoset::from_leq(labels, |a, b| elements[a].leq(&elements[b])).expect("refinement is a partial order");
        let mut ordered = elements.clone();
        for (i, e) in elements.into_iter().enumerate() {
            ordered[new_index[i]] = e;
        }
        PartitionPoset { elements: ordered, poset }
    }

    pub fn index_of(&self, p: &PointedSetPartition) -> Option<usize> {
        self.elements.iter().position(|e| e == p)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `Π•_n`: all pointed set partitions of `[n]` ordered by merging blocks and
/// moving blocks into `Z`.
pub fn build_pointed_partition_lattice(n: usize, caps: &Caps) -> Result<PartitionPoset> {
    Caps::check(n, caps.poset, "pointed partition lattice")?;
    Ok(PartitionPoset::from_elements(PointedSetPartition::all(n)))
}

/// `Π•_c`: elements whose type is the pointed type of some `d ≥ c`.
pub fn build_subposet_pi_c(c: &PointedComposition, caps: &Caps) -> Result<PartitionPoset> {
    Caps::check(c.n(), caps.poset, "pointed partition subposet")?;
    let types: BTreeSet<PointedIntegerPartition> = c.coarsenings().iter().map(PointedComposition::pointed_type).collect();
    let elements = PointedSetPartition::all(c.n()).into_iter().filter(|p| types.contains(&p.pointed_type())).collect();
    Ok(PartitionPoset::from_elements(elements))
}

/// `Π•_{λ,m̲}`: the filter generated by the elements of type `{λ, m̲}`.
/// Non-knapsack `λ` is rejected unless `allow_non_knapsack` is set.
pub fn build_filter_pi_lambda_m(p: &PointedIntegerPartition, caps: &Caps, allow_non_knapsack: bool) -> Result<PartitionPoset> {
    if !allow_non_knapsack {
        Knapsack::new(&p.lambda)?;
    }
    let n = p.n();
    if n == 0 {
        return Err(Error::InvalidPointedPartition("partition of zero".into()));
    }
    Caps::check(n, caps.poset, "pointed partition filter")?;
    let elements = PointedSetPartition::all(n).into_iter().filter(|q| filter_contains_type(p, &q.pointed_type())).collect();
    Ok(PartitionPoset::from_elements(elements))
}

/// Whether an element of type `t` lies above some element of type `generator`:
/// the parts of `generator.lambda` can be grouped to fill each block of `t`
/// exactly, with the leftover parts and `generator.m` filling `Z`.
pub fn filter_contains_type(generator: &PointedIntegerPartition, t: &PointedIntegerPartition) -> bool {
    if generator.n() != t.n() || t.m < generator.m {
        return false;
    }
    // bins: blocks of t, then Z with what remains after the generator's Z
    let mut room: Vec<usize> = t.lambda.clone();
    room.push(t.m - generator.m);
    fn go(parts: &[usize], room: &mut [usize]) -> bool {
        let Some((&p, rest)) = parts.split_first() else {
            return room.iter().all(|&r| r == 0);
        };
        let mut tried = BTreeSet::new();
        for i in 0..room.len() {
            // bins with equal room are interchangeable, except Z (the last)
            if room[i] >= p && (i == room.len() - 1 || tried.insert(room[i])) {
                room[i] -= p;
                if go(rest, room) {
                    room[i] += p;
                    return true;
                }
                room[i] += p;
            }
        }
        false
    }
    go(&generator.lambda, &mut room)
}

/// `Π^d_size`: set partitions of `[size]` with every block size divisible
/// by `d`, under refinement, without an adjoined bottom.
pub fn build_divisible_partition_lattice(size: usize, d: usize, caps: &Caps) -> Result<FinitePoset> {
    Caps::check(size.saturating_sub(1), caps.poset, "divisible partition lattice")?;
    let parts: Vec<Vec<u64>> =
        set_partitions(size).into_iter().filter(|bs| bs.iter().all(|b| (b.count_ones() as usize).is_multiple_of(d))).collect();
    let labels = parts.iter().map(|bs| bs.iter().map(|&b| block_string(size, b)).join("|")).collect();
    let refines = |a: usize, b: usize| parts[a].iter().all(|&x| parts[b].iter().any(|&y| x & !y == 0));
    Ok(FinitePoset::from_leq(labels, refines)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{is_knapsack, Knapsack};

    fn psp(s: &str) -> PointedSetPartition {
        s.parse().unwrap()
    }

    fn comp(s: &str) -> PointedComposition {
        s.parse().unwrap()
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["1358|4|_267", "1|2|34|_5", "_123", "12|3|_"] {
            assert_eq!(psp(s).to_string(), s);
        }
        assert_eq!(psp("4|1358|_267").to_string(), "1358|4|_267");
        assert!("1|1|_2".parse::<PointedSetPartition>().is_err());
    }

    #[test]
    fn order_relation() {
        assert!(psp("1|2|34|_5").leq(&psp("34|_125")));
        assert!(psp("1|2|34|_5").leq(&psp("12|34|_5")));
        assert!(!psp("12|34|_5").leq(&psp("1|2|34|_5")));
        assert!(!psp("1|2|_3").leq(&psp("13|_2")));
    }

    #[test]
    fn lattice_sizes_are_bell_numbers() {
        let caps = Caps::default();
        for (n, bell) in [(1, 2), (2, 5), (3, 15), (4, 52), (5, 203)] {
            let p = build_pointed_partition_lattice(n, &caps).unwrap();
            assert_eq!(p.len(), bell);
        }
        let one = build_pointed_partition_lattice(1, &caps).unwrap();
        let labels: BTreeSet<&str> = one.poset.labels().iter().map(String::as_str).collect();
        assert_eq!(labels, BTreeSet::from(["1|_", "_1"]));
        assert!(build_pointed_partition_lattice(8, &caps).is_err());
    }

    /// Adding `n+1` to `Z` identifies `Π•_n` with `Π_{n+1}`, cover for cover.
    #[test]
    fn isomorphic_to_partition_lattice() {
        let caps = Caps::default();
        for n in 1..=5 {
            let pointed = build_pointed_partition_lattice(n, &caps).unwrap();
            let full = build_divisible_partition_lattice(n + 1, 1, &Caps::uniform(n + 1)).unwrap();
            assert_eq!(pointed.len(), full.len());
            assert_eq!(pointed.poset.covers().len(), full.covers().len());
            assert_eq!(pointed.poset.mobius().unwrap(), full.mobius().unwrap());
        }
    }

    #[test]
    fn pi_c_examples() {
        let caps = Caps::default();
        let p = build_subposet_pi_c(&comp("1,1,2,1"), &caps).unwrap();
        assert!(p.index_of(&psp("1|2|34|_5")).is_some());
        assert!(p.index_of(&psp("34|_125")).is_some());
        assert!(p.index_of(&psp("2|34|_15")).is_none());
        assert_eq!(build_subposet_pi_c(&comp("4"), &caps).unwrap().len(), 1);
        let even = build_subposet_pi_c(&comp("2,1"), &caps).unwrap();
        assert_eq!(even.len(), build_divisible_partition_lattice(4, 2, &caps).unwrap().len());
    }

    #[test]
    fn pi_1121_is_not_a_lattice() {
        let caps = Caps::default();
        let p = build_subposet_pi_c(&comp("1,1,2,1"), &caps).unwrap();
        let bounded = p.poset.with_bottom("0");
        let a = bounded.index_of("1|2|34|_5").unwrap();
        let b = bounded.index_of(&psp("2|5|34|_1").to_string()).unwrap();
        assert_eq!(bounded.join(a, b), None);
        assert!(bounded.lattice_witness().is_some());
        assert!(build_pointed_partition_lattice(4, &caps).unwrap().poset.is_lattice());
    }

    #[test]
    fn filter_examples() {
        let caps = Caps::default();
        let f = build_filter_pi_lambda_m(&PointedIntegerPartition::new(vec![3, 1, 1], 0), &caps, false).unwrap();
        assert!(f.index_of(&psp("1|2|345|_")).is_some());
        let g = PointedIntegerPartition::new(vec![2, 1], 1);
        let f = build_filter_pi_lambda_m(&g, &caps, false).unwrap();
        assert_eq!(f.elements.iter().filter(|e| e.pointed_type() == g).count(), 12);
        assert!(f.poset.with_bottom("0").is_lattice());
        assert!(build_filter_pi_lambda_m(&PointedIntegerPartition::new(vec![3, 2, 1], 0), &caps, false).is_err());
        assert!(build_filter_pi_lambda_m(&PointedIntegerPartition::new(vec![3, 2, 1], 0), &caps, true).is_ok());
    }

    /// The type-level membership test against the definition: some element
    /// of the generating type lies below.
    #[test]
    fn filter_membership_matches_definition() {
        for n in 1..=5 {
            let all = PointedSetPartition::all(n);
            for g in PointedIntegerPartition::all(n) {
                let generators: Vec<&PointedSetPartition> = all.iter().filter(|p| p.pointed_type() == g).collect();
                for q in &all {
                    let oracle = generators.iter().any(|s| s.leq(q));
                    assert_eq!(filter_contains_type(&g, &q.pointed_type()), oracle, "{g} below {q}");
                }
            }
        }
    }

    #[test]
    fn single_part_filter_is_principal_type() {
        let caps = Caps::default();
        let g = PointedIntegerPartition::new(vec![3], 1);
        assert!(is_knapsack(&g.lambda));
        Knapsack::new(&g.lambda).unwrap();
        let f = build_filter_pi_lambda_m(&g, &caps, false).unwrap();
        let all = PointedSetPartition::all(4);
        let gens: Vec<_> = all.iter().filter(|p| p.pointed_type() == g).collect();
        for q in &all {
            assert_eq!(f.index_of(q).is_some(), gens.iter().any(|s| s.leq(q)));
        }
    }
}
