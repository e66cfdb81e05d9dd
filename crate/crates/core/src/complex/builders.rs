use itertools::Itertools;

use super::{OrderedSetPartition, SimplicialComplex};
use crate::caps::Caps;
use crate::combinatorics::{mask_elements, mask_of, Knapsack, Permutation, PointedComposition, PointedIntegerPartition};
use crate::error::{Error, Result};

/// `Δ_c`: ordered set partitions whose type is at least `c`, i.e. the
/// downward closure of the facets of type `c`.
pub fn build_delta_c(c: &PointedComposition, caps: &Caps) -> Result<SimplicialComplex<OrderedSetPartition>> {
    Caps::check(c.n(), caps.delta, "complex Δ_c")?;
    Ok(SimplicialComplex::from_facets(OrderedSetPartition::all_of_type(c)))
}

/// `Λ_{λ,m̲}`: ordered set partitions whose pointed image lies in the filter
/// generated by type `{λ, m̲}`. Requires `λ` to be knapsack.
pub fn build_lambda(p: &PointedIntegerPartition, caps: &Caps) -> Result<SimplicialComplex<OrderedSetPartition>> {
    Knapsack::new(&p.lambda)?;
    build_lambda_unchecked(p, caps)
}

/// As [`build_lambda`] without the knapsack requirement.
pub fn build_lambda_unchecked(p: &PointedIntegerPartition, caps: &Caps) -> Result<SimplicialComplex<OrderedSetPartition>> {
    let n = p.n();
    if n == 0 {
        return Err(Error::InvalidComposition { parts: vec![], reason: "composition of zero" });
    }
    Caps::check(n, caps.lambda, "complex Λ")?;
    let mut generators = Vec::new();
    for order in p.lambda.iter().copied().permutations(p.lambda.len()).unique() {
        let mut parts = order;
        parts.push(p.m);
        generators.extend(OrderedSetPartition::all_of_type(&PointedComposition::from_parts_unchecked(parts)));
    }
    Ok(SimplicialComplex::from_facets(generators))
}

/// `σ(α, c)`: the word of `α` cut into consecutive segments of sizes `c`.
pub fn sigma(alpha: &Permutation, c: &PointedComposition) -> Result<OrderedSetPartition> {
    if alpha.len() != c.n() {
        return Err(Error::SizeMismatch { left: alpha.len(), right: c.n() });
    }
    let blocks = c.rows().into_iter().map(|r| mask_of(r.map(|j| alpha.apply(j)))).collect();
    Ok(OrderedSetPartition::from_blocks_unchecked(c.n(), blocks))
}

/// `σ⁻¹(F)`: the blocks of `F` written in increasing order, the weak-order
/// minimum among permutations `α` with `σ(α, type F) = F`.
pub fn sigma_inverse(f: &OrderedSetPartition) -> Permutation {
    let word = f.blocks().iter().flat_map(|&b| mask_elements(b)).collect();
    Permutation::new(word).expect("blocks partition [n]")
}
