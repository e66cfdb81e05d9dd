use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::cycles::{column_stabilizer, cycle_g_alpha, cycle_g_alpha_d, relabel_chain};
use super::{BorderStrip, Tableau, Tabloid};
use crate::caps::Caps;
use crate::combinatorics::{Knapsack, Permutation, PointedComposition, PointedIntegerPartition};
use crate::complex::smith::{invariant_factors, SparseMatrix};
use crate::complex::{sigma, ChainElement, OrderedSetPartition};
use crate::error::{Error, Result};

/// The polytabloid `e_t = Σ_{γ ∈ S^c} (−1)^γ {t∘γ}`, with tabloids written
/// as facets of `Δ_c`.
pub fn polytabloid(t: &Tableau) -> Result<ChainElement<OrderedSetPartition>> {
    let c = t.strip().composition();
    let alpha = t.permutation();
    let mut e = ChainElement::zero(c.len() as isize - 2);
    for (gamma, sign) in column_stabilizer(c)? {
        let moved = Tableau::from_permutation(&alpha.compose(&gamma), c)?;
        e.add_term(moved.tabloid().facet(), sign);
    }
    Ok(e)
}

fn check_psi_shape(s: &Tabloid, d: &PointedComposition) -> Result<()> {
    if s.strip().composition() != d {
        return Err(Error::ShapeMismatch(format!("tabloid of shape {} used with {d}", s.strip().composition())));
    }
    Ok(())
}

/// `Ψ(s) = Σ_{c ∈ W(d)} (−1)^c σ(α, c)`, where `α` reads each row of `s`
/// in increasing order.
pub fn psi(s: &Tabloid, d: &PointedComposition, k: &Knapsack, m: usize) -> Result<ChainElement<OrderedSetPartition>> {
    if m == 0 {
        return Err(Error::ZeroPointedPart);
    }
    check_psi_shape(s, d)?;
    let alpha = s.row_sorted_reading();
    let mut out = ChainElement::zero(k.lambda().len() as isize - 1);
    for (c, sign) in k.w_set(d, m)? {
        out.add_term(sigma(&alpha, &c)?, sign);
    }
    Ok(out)
}

/// `Ψ(e_t)`, extending `Ψ` linearly over the tabloids of `e_t`.
pub fn psi_of_polytabloid(t: &Tableau, k: &Knapsack, m: usize) -> Result<ChainElement<OrderedSetPartition>> {
    let d = t.strip().composition();
    let mut out = ChainElement::zero(k.lambda().len() as isize - 1);
    for (f, coeff) in polytabloid(t)?.terms() {
        out.add(&psi(&Tabloid::from_facet(f)?, d, k, m)?.scaled(coeff));
    }
    Ok(out)
}

/// Comparison of `Ψ(e_t)` with `g_{α,d}` for one basis label.
#[derive(Clone, Debug, Serialize)]
pub struct PsiCheck {
    pub alpha: String,
    pub d: String,
    pub equal: bool,
    /// Faces where the coefficients differ: `(face, Ψ(e_t), g_{α,d})`.
    pub differences: Vec<(String, i64, i64)>,
}

/// `Ψ(e_t) = g_{α,d}` for every `d ∈ V(λ,m̲)` and `α` with `Des(α) = d`.
pub fn verify_psi_images(p: &PointedIntegerPartition, caps: &Caps) -> Result<Vec<PsiCheck>> {
    Caps::check(p.n(), caps.beta, "descent enumeration")?;
    let k = Knapsack::new(&p.lambda)?;
    let mut out = Vec::new();
    for d in k.v_set(p.m) {
        for alpha in Permutation::with_descent_composition(&d) {
            let t = Tableau::from_permutation(&alpha, &d)?;
            let lhs = psi_of_polytabloid(&t, &k, p.m)?;
            let rhs = cycle_g_alpha_d(&alpha, &d, &k, p.m)?;
            let mut faces: Vec<&OrderedSetPartition> = lhs.terms().chain(rhs.terms()).map(|(f, _)| f).collect();
            faces.sort();
            faces.dedup();
            let differences: Vec<(String, i64, i64)> = faces
                .into_iter()
                .filter(|f| lhs.coefficient(f) != rhs.coefficient(f))
                .map(|f| (f.to_string(), lhs.coefficient(f), rhs.coefficient(f)))
                .collect();
            out.push(PsiCheck { alpha: alpha.to_string(), d: d.to_string(), equal: differences.is_empty(), differences });
        }
    }
    Ok(out)
}

/// A tabloid `s` and generator `ω` with `Ψ(ω·s) ≠ ω·Ψ(s)`, if any, over all
/// shapes `d ∈ V(λ,m̲)` and adjacent transpositions.
pub fn psi_equivariance_defect(p: &PointedIntegerPartition, caps: &Caps) -> Result<Option<(String, String)>> {
    Caps::check(p.n(), caps.beta, "tabloid enumeration")?;
    let k = Knapsack::new(&p.lambda)?;
    let n = p.n();
    for d in k.v_set(p.m) {
        let strip = BorderStrip::new(&d)?;
        for s in Tabloid::all(&strip) {
            let image = psi(&s, &d, &k, p.m)?;
            for i in 1..n {
                let omega = Permutation::adjacent_transposition(n, i);
                if psi(&s.relabel(&omega), &d, &k, p.m)? != relabel_chain(&image, &omega) {
                    return Ok(Some((s.to_string(), omega.to_string())));
                }
            }
        }
    }
    Ok(None)
}

/// Span of `{g_α}` against its images under adjacent transpositions.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub composition: String,
    pub rank: usize,
    /// Generators `i` for which `s_i · {g_α}` raises the rank.
    pub rational_failures: Vec<usize>,
    /// Generators for which the images leave the integer row lattice.
    pub integral_failures: Vec<usize>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.rational_failures.is_empty() && self.integral_failures.is_empty()
    }
}

fn lattice_invariants(
    rows: &[ChainElement<OrderedSetPartition>],
    index: &mut HashMap<OrderedSetPartition, usize>,
) -> (usize, BigInt) {
    for g in rows {
        for (f, _) in g.terms() {
            let next = index.len();
            index.entry(f.clone()).or_insert(next);
        }
    }
    let mut m = SparseMatrix::new(index.len());
    for g in rows {
        m.push_row(g.terms().map(|(f, c)| (index[f], c)).collect());
    }
    let factors = invariant_factors(&m);
    let det = factors.iter().fold(BigInt::one(), |acc, f| acc * f);
    (factors.len(), det)
}

/// The span of `{g_α : Des(α) = c}` is closed under every adjacent
/// transposition, over `Q` (rank unchanged) and over `Z` (same lattice).
pub fn group_action_closure(c: &PointedComposition, caps: &Caps) -> Result<ClosureReport> {
    if !c.has_positive_last() {
        return Err(Error::TrailingZero(c.to_string()));
    }
    Caps::check(c.n(), caps.beta, "descent enumeration")?;
    let n = c.n();
    let base: Vec<ChainElement<OrderedSetPartition>> =
        Permutation::with_descent_composition(c).iter().map(|a| cycle_g_alpha(a, c)).collect::<Result<_>>()?;
    let mut index = HashMap::new();
    let (rank, det) = lattice_invariants(&base, &mut index);
    let mut rational_failures = Vec::new();
    let mut integral_failures = Vec::new();
    for i in 1..n {
        let omega = Permutation::adjacent_transposition(n, i);
        let mut stacked = base.clone();
        stacked.extend(base.iter().map(|g| relabel_chain(g, &omega)));
        let (r2, d2) = lattice_invariants(&stacked, &mut index.clone());
        if r2 != rank {
            rational_failures.push(i);
        } else if d2 != det {
            integral_failures.push(i);
        }
    }
    Ok(ClosureReport { composition: c.to_string(), rank, rational_failures, integral_failures })
}

/// Standard Young tableaux of the border strip of `c`, counted as linear
/// extensions of its boxes (left < right within a row, upper < lower within
/// a column) by dynamic programming over order ideals.
pub fn count_standard_tableaux(c: &PointedComposition) -> Result<u64> {
    let strip = BorderStrip::new(c)?;
    let n = strip.n();
    if n > 24 {
        return Err(Error::CapExceeded { what: "standard tableau count", n, cap: 24 });
    }
    // below[b]: boxes that must receive smaller entries than b
    let mut below = vec![0u32; n];
    for row in strip.rows() {
        for w in row.windows(2) {
            below[w[1] - 1] |= 1 << (w[0] - 1);
        }
    }
    for col in strip.columns() {
        for w in col.windows(2) {
            below[w[0] - 1] |= 1 << (w[1] - 1);
        }
    }
    let mut ways = vec![0u64; 1 << n];
    ways[0] = 1;
    for ideal in 0..(1usize << n) {
        let w = ways[ideal];
        if w == 0 {
            continue;
        }
        for b in 0..n {
            if ideal & (1 << b) == 0 && below[b] as usize & !ideal == 0 {
                ways[ideal | (1 << b)] += w;
            }
        }
    }
    Ok(ways[(1 << n) - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::beta;

    fn comp(s: &str) -> PointedComposition {
        s.parse().unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn polytabloid_is_g_alpha() {
        let c = comp("1,2,1");
        let t = Tableau::from_permutation(&perm("2143"), &c).unwrap();
        assert_eq!(polytabloid(&t).unwrap(), cycle_g_alpha(&perm("2143"), &c).unwrap());
    }

    #[test]
    fn psi_example() {
        let k = Knapsack::new(&[2, 1]).unwrap();
        let d = comp("3,1");
        let s = Tabloid::new(BorderStrip::new(&d).unwrap(), vec![vec![1, 2, 3], vec![4]]).unwrap();
        let mut expected = ChainElement::zero(1);
        expected.add_term("12-3-4".parse().unwrap(), 1);
        expected.add_term("1-23-4".parse().unwrap(), -1);
        assert_eq!(psi(&s, &d, &k, 1).unwrap(), expected);
        assert!(psi(&s, &comp("2,1,1"), &k, 1).is_err());
    }

    #[test]
    fn psi_images_for_211() {
        let checks = verify_psi_images(&PointedIntegerPartition::new(vec![2, 1], 1), &Caps::default()).unwrap();
        assert_eq!(checks.len(), 11);
        // With the row-sorted reading, labels of shape (3,1) whose column
        // transposition leaves a row unsorted differ from g_{α,d}.
        let failing: Vec<(&str, &str)> = checks.iter().filter(|c| !c.equal).map(|c| (c.alpha.as_str(), c.d.as_str())).collect();
        assert_eq!(failing, vec![("1342", "(3,1)"), ("2341", "(3,1)")]);
    }

    #[test]
    fn psi_is_not_equivariant_under_row_sorting() {
        let defect = psi_equivariance_defect(&PointedIntegerPartition::new(vec![2, 1], 1), &Caps::default()).unwrap();
        assert!(defect.is_some());
        let none = psi_equivariance_defect(&PointedIntegerPartition::new(vec![1], 2), &Caps::default()).unwrap();
        assert_eq!(none, None);
    }

    #[test]
    fn closure_for_121() {
        let r = group_action_closure(&comp("1,2,1"), &Caps::default()).unwrap();
        assert_eq!(r.rank, 5);
        assert!(r.passed(), "{r:?}");
        assert!(group_action_closure(&comp("3"), &Caps::default()).unwrap().passed());
    }

    #[test]
    fn syt_counts_match_beta() {
        assert_eq!(count_standard_tableaux(&comp("1,2,1")).unwrap(), 5);
        for n in 1..=6 {
            for c in PointedComposition::all_positive(n) {
                assert_eq!(count_standard_tableaux(&c).unwrap(), beta(&c, &Caps::default()).unwrap(), "{c}");
            }
        }
    }

    #[test]
    fn syt_count_agrees_with_filling_enumeration() {
        for c in PointedComposition::all_positive(5) {
            let strip = BorderStrip::new(&c).unwrap();
            let brute =
                Permutation::all(5).filter(|a| Tableau::new(strip.clone(), a.word().to_vec()).unwrap().is_standard()).count();
            assert_eq!(count_standard_tableaux(&c).unwrap(), brute as u64, "{c}");
        }
    }
}
