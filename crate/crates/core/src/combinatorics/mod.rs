//! Permutations, pointed compositions and integer partitions.

mod composition;
mod descent;
mod knapsack;
mod permutation;

pub use composition::{IntervalDecomposition, PointedComposition, PointedIntegerPartition};
pub use descent::{beta, beta_sum, DescentTable};
pub use knapsack::{is_knapsack, Knapsack};
pub use permutation::Permutation;

/// Iterates the members of a bitmask from the lowest bit up, as 1-based values.
pub(crate) fn mask_elements(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(bit + 1)
        }
    })
}

/// Mask of the 1-based values in `values`.
pub(crate) fn mask_of(values: impl IntoIterator<Item = usize>) -> u64 {
    values.into_iter().fold(0u64, |acc, v| acc | (1u64 << (v - 1)))
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
