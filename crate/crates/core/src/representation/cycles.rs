use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::combinatorics::{Knapsack, Permutation, PointedComposition, PointedIntegerPartition};
use crate::complex::smith::{rank, SparseMatrix};
use crate::complex::{
    build_delta_c, build_lambda, reduced_homology, sigma, ChainElement, OrderedSetPartition, SimplicialComplex,
};
use crate::error::{Error, Result};

/// All permutations fixing each interval of positions setwise, with signs.
fn young_subgroup(n: usize, intervals: &[Vec<usize>]) -> Vec<(Permutation, i64)> {
    intervals
        .iter()
        .map(|iv| iv.iter().copied().permutations(iv.len()).map(move |img| (iv.clone(), img)).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|choice| {
            let mut word: Vec<usize> = (1..=n).collect();
            for (src, img) in choice {
                for (s, t) in src.into_iter().zip(img) {
                    word[s - 1] = t;
                }
            }
            let p = Permutation::new(word).expect("block-wise bijection");
            let sign = p.sign();
            (p, sign)
        })
        .collect()
}

fn intervals(ranges: &[std::ops::RangeInclusive<usize>]) -> Vec<Vec<usize>> {
    ranges.iter().map(|r| r.clone().collect()).filter(|v: &Vec<usize>| !v.is_empty()).collect()
}

/// The column stabilizer `S^c_c = S_{K₁} × ⋯`, acting on positions.
pub fn column_stabilizer(c: &PointedComposition) -> Result<Vec<(Permutation, i64)>> {
    let k = c.interval_decomposition()?;
    Ok(young_subgroup(c.n(), &intervals(&k.columns)))
}

/// The row stabilizer `S_c = S_{R₁} × ⋯`, acting on positions.
pub fn row_stabilizer(c: &PointedComposition) -> Vec<(Permutation, i64)> {
    young_subgroup(c.n(), &intervals(&c.rows()))
}

/// `g_α = Σ_{γ ∈ S^c_c} (−1)^γ σ(α∘γ)`.
pub fn cycle_g_alpha(alpha: &Permutation, c: &PointedComposition) -> Result<ChainElement<OrderedSetPartition>> {
    if alpha.len() != c.n() {
        return Err(Error::SizeMismatch { left: alpha.len(), right: c.n() });
    }
    let mut g = ChainElement::zero(c.len() as isize - 2);
    for (gamma, sign) in column_stabilizer(c)? {
        g.add_term(sigma(&alpha.compose(&gamma), c)?, sign);
    }
    Ok(g)
}

/// `g_{α,d} = Σ_{γ ∈ S^c_d} Σ_{c ∈ W(d)} (−1)^γ (−1)^c σ(α∘γ, c)`.
pub fn cycle_g_alpha_d(
    alpha: &Permutation,
    d: &PointedComposition,
    k: &Knapsack,
    m: usize,
) -> Result<ChainElement<OrderedSetPartition>> {
    if m == 0 {
        return Err(Error::ZeroPointedPart);
    }
    if alpha.len() != d.n() {
        return Err(Error::SizeMismatch { left: alpha.len(), right: d.n() });
    }
    let w = k.w_set(d, m)?;
    let mut g = ChainElement::zero(k.lambda().len() as isize - 1);
    for (gamma, gs) in column_stabilizer(d)? {
        let ag = alpha.compose(&gamma);
        for (c, cs) in &w {
            g.add_term(sigma(&ag, c)?, gs * cs);
        }
    }
    Ok(g)
}

/// `ω · x`, relabelling every face of the chain.
pub fn relabel_chain(x: &ChainElement<OrderedSetPartition>, omega: &Permutation) -> ChainElement<OrderedSetPartition> {
    let mut out = ChainElement::zero(x.dim());
    for (f, c) in x.terms() {
        out.add_term(f.relabel(omega), c);
    }
    out
}

/// The sphere `Σ_α ⊆ Δ_c` with facets `{σ(α∘γ) : γ ∈ S^c_c}`.
pub fn build_sigma_alpha(alpha: &Permutation, c: &PointedComposition) -> Result<SimplicialComplex<OrderedSetPartition>> {
    let facets = column_stabilizer(c)?.iter().map(|(g, _)| sigma(&alpha.compose(g), c)).collect::<Result<Vec<_>>>()?;
    Ok(SimplicialComplex::from_facets(facets))
}

/// `Σ_{α,d} ⊆ Λ` with facets `{σ(α∘γ, c) : c ∈ W(d), γ ∈ S^c_d}`.
pub fn build_sigma_alpha_d(
    alpha: &Permutation,
    d: &PointedComposition,
    k: &Knapsack,
    m: usize,
) -> Result<SimplicialComplex<OrderedSetPartition>> {
    let w = k.w_set(d, m)?;
    let mut facets = Vec::new();
    for (g, _) in column_stabilizer(d)? {
        let ag = alpha.compose(&g);
        for (c, _) in &w {
            facets.push(sigma(&ag, c)?);
        }
    }
    Ok(SimplicialComplex::from_facets(facets))
}

/// Outcome of a cycle-basis verification.
#[derive(Clone, Debug, Serialize)]
pub struct CycleBasisReport {
    pub label: String,
    pub cycles: usize,
    /// `β(c)`, or `Σ_{d∈V} β(d)` in the knapsack case.
    pub expected_rank: usize,
    pub rank: usize,
    pub top_betti: usize,
    /// Labels whose cycle has nonzero boundary.
    pub boundary_failures: Vec<String>,
    /// `(cycle label, critical facet, coefficient)` breaking unitriangularity.
    pub triangularity_failures: Vec<(String, String, i64)>,
}

impl CycleBasisReport {
    pub fn passed(&self) -> bool {
        self.boundary_failures.is_empty()
            && self.triangularity_failures.is_empty()
            && self.rank == self.expected_rank
            && self.top_betti == self.expected_rank
            && self.cycles == self.expected_rank
    }
}

struct Labelled {
    label: String,
    alpha: Permutation,
    chain: ChainElement<OrderedSetPartition>,
}

fn cycle_matrix(chains: &[&ChainElement<OrderedSetPartition>], top: &[OrderedSetPartition]) -> SparseMatrix {
    let index: HashMap<&OrderedSetPartition, usize> = top.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut m = SparseMatrix::new(top.len());
    for g in chains {
        m.push_row(g.terms().map(|(f, c)| (index[f], c)).collect());
    }
    m
}

/// Shared checks: boundaries, rank, top Betti number and triangularity
/// against the critical facets `(α′, facet)`.
fn check_cycles(
    label: String,
    complex: &SimplicialComplex<OrderedSetPartition>,
    top_dim: isize,
    cycles: &[Labelled],
    critical: &[(Permutation, OrderedSetPartition)],
    expected_rank: usize,
) -> CycleBasisReport {
    let boundary_failures = cycles.iter().filter(|g| !g.chain.boundary().is_zero()).map(|g| g.label.clone()).collect();
    let chains: Vec<&ChainElement<OrderedSetPartition>> = cycles.iter().map(|g| &g.chain).collect();
    let r = rank(&cycle_matrix(&chains, complex.faces(top_dim)));
    let top_betti = reduced_homology(complex).betti_at(top_dim);
    let mut triangularity_failures = Vec::new();
    for g in cycles {
        for (a2, facet) in critical {
            let coeff = g.chain.coefficient(facet);
            let ok = if *a2 == g.alpha { coeff == 1 } else { coeff == 0 || a2.weak_bruhat_leq(&g.alpha) };
            if !ok {
                triangularity_failures.push((g.label.clone(), facet.to_string(), coeff));
            }
        }
    }
    CycleBasisReport { label, cycles: cycles.len(), expected_rank, rank: r, top_betti, boundary_failures, triangularity_failures }
}

/// `{g_α : Des(α) = c}` is a basis of `H̃_{k−2}(Δ_c)`.
pub fn verify_cycle_basis(c: &PointedComposition, caps: &Caps) -> Result<CycleBasisReport> {
    if !c.has_positive_last() {
        return Err(Error::TrailingZero(c.to_string()));
    }
    Caps::check(c.n(), caps.beta, "descent enumeration")?;
    let complex = build_delta_c(c, caps)?;
    let alphas = Permutation::with_descent_composition(c);
    let cycles: Vec<Labelled> = alphas
        .par_iter()
        .map(|a| cycle_g_alpha(a, c).map(|chain| Labelled { label: a.to_string(), alpha: a.clone(), chain }))
        .collect::<Result<_>>()?;
    let critical = alphas.iter().map(|a| sigma(a, c).map(|f| (a.clone(), f))).collect::<Result<Vec<_>>>()?;
    let expected = alphas.len();
    Ok(check_cycles(c.to_string(), &complex, c.len() as isize - 2, &cycles, &critical, expected))
}

/// `{g_{α,d} : d ∈ V(λ,m̲), Des(α) = d}` is a basis of `H̃_{k−1}(Λ)`, with
/// triangularity against the critical cells `σ(α′, ε(d′))`.
pub fn verify_knapsack_cycle_basis(p: &PointedIntegerPartition, caps: &Caps) -> Result<CycleBasisReport> {
    if p.m == 0 {
        return Err(Error::ZeroPointedPart);
    }
    Caps::check(p.n(), caps.beta, "descent enumeration")?;
    let k = Knapsack::new(&p.lambda)?;
    let complex = build_lambda(p, caps)?;
    let mut labels = Vec::new();
    for d in k.v_set(p.m) {
        let eps = k.epsilon(&d, p.m)?;
        for a in Permutation::with_descent_composition(&d) {
            labels.push((a, d.clone(), eps.clone()));
        }
    }
    let cycles: Vec<Labelled> = labels
        .par_iter()
        .map(|(a, d, _)| {
            cycle_g_alpha_d(a, d, &k, p.m).map(|chain| Labelled { label: format!("{a} {d}"), alpha: a.clone(), chain })
        })
        .collect::<Result<_>>()?;
    let critical = labels.iter().map(|(a, _, e)| sigma(a, e).map(|f| (a.clone(), f))).collect::<Result<Vec<_>>>()?;
    let top = p.lambda.len() as isize - 1;
    Ok(check_cycles(p.to_string(), &complex, top, &cycles, &critical, labels.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(s: &str) -> PointedComposition {
        s.parse().unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn osp(s: &str) -> OrderedSetPartition {
        s.parse().unwrap()
    }

    #[test]
    fn g_alpha_for_121() {
        // columns of the strip are {1,2} and {3,4}
        let g = cycle_g_alpha(&perm("2143"), &comp("1,2,1")).unwrap();
        let mut expected = ChainElement::zero(1);
        for (word, sign) in [("2143", 1), ("1243", -1), ("2134", -1), ("1234", 1)] {
            expected.add_term(sigma(&perm(word), &comp("1,2,1")).unwrap(), sign);
        }
        assert_eq!(g, expected);
        assert!(g.boundary().is_zero());
    }

    #[test]
    fn single_row_cycle_is_the_empty_face() {
        let g = cycle_g_alpha(&perm("123"), &comp("3")).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.coefficient(&OrderedSetPartition::whole(3)), 1);
        assert_eq!(g.dim(), -1);
    }

    #[test]
    fn g_alpha_term_count_is_the_column_stabilizer_order() {
        let c = comp("2,3,1,1,3");
        let alpha = perm("5 7 4 10 8 1 3 6 2 9");
        let g = cycle_g_alpha(&alpha, &c).unwrap();
        assert_eq!(g.len(), 2 * 24);
        assert!(g.boundary().is_zero());
    }

    #[test]
    fn knapsack_cycle_example() {
        let k = Knapsack::new(&[2, 1]).unwrap();
        let alpha = perm("1432");
        let d = comp("2,1,1");
        assert_eq!(alpha.descent_composition(), d);
        let g = cycle_g_alpha_d(&alpha, &d, &k, 1).unwrap();
        assert!(g.boundary().is_zero());
        assert_eq!(g.coefficient(&osp("14-3-2")), 1);
        assert!(cycle_g_alpha_d(&alpha, &d, &k, 0).is_err());
    }

    #[test]
    fn basis_for_121_and_211() {
        let caps = Caps::default();
        let r = verify_cycle_basis(&comp("1,2,1"), &caps).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.rank, 5);
        let r = verify_cycle_basis(&comp("4"), &caps).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.rank, 1);
        let r = verify_knapsack_cycle_basis(&PointedIntegerPartition::new(vec![2, 1], 1), &caps).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.rank, 11);
    }

    #[test]
    fn sigma_alpha_is_a_sphere() {
        let s = build_sigma_alpha(&perm("2143"), &comp("1,2,1")).unwrap();
        assert_eq!(reduced_homology(&s).trimmed_betti(), vec![0, 1]);
        let p = build_sigma_alpha(&perm("1234"), &comp("1,1,1,1")).unwrap();
        assert!(reduced_homology(&p).is_concentrated(2, 1));
        let point = build_sigma_alpha(&perm("123"), &comp("3")).unwrap();
        assert_eq!(point.num_faces(), 1);
    }

    #[test]
    fn stabilizer_orders() {
        assert_eq!(column_stabilizer(&comp("2,3,1,1,3")).unwrap().len(), 48);
        assert_eq!(row_stabilizer(&comp("2,3,1,1,3")).len(), 2 * 6 * 6);
        assert!(column_stabilizer(&comp("2,0")).is_err());
    }
}
