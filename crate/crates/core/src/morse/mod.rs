//! The discrete Morse matching on the knapsack complex `Λ_{λ,m̲}`.
//!
//! For a face `τ = (C₁,…,C_r)` the conditions are
//!
//! * `Aᵢ` (`i ≤ r−2`): `max Cᵢ < min Cᵢ₊₁` and `|Cᵢ| ≤ κ(|Cᵢ₊₁|)`;
//! * `A_{r−1}`: `max C_{r−1} < min C_r`;
//! * `Bᵢ` (`i ≤ r−1`): `κ(|Cᵢ|) < |Cᵢ|`;
//! * `B_r`: `|C_r| > m`.
//!
//! Scanning `j = 1, 2, …`, the first `j < r` with `A_j` or `B_j` decides:
//! `B_j` splits off the `κ(|C_j|)` smallest elements of `C_j` (matched up),
//! otherwise `A_j` merges `C_j ∪ C_{j+1}` (matched down). If no such `j`
//! exists, `B_r` splits off the `κ(|C_r| − m)` smallest elements of `C_r`;
//! failing that the face is critical. The edge type is the index `j`.
//!
//! Read literally, `A_{r−1}` ignores sizes, and the rule is then not an
//! involution: on `{2,1,1̲}` the face `12-34` merges down to `1234`, which
//! itself splits up to `1-234`. [`MatchRule::Consistent`] (the default)
//! adds `|C_{r−1}| ≤ κ(|C_r| − m)` to `A_{r−1}` (vacuous when `|C_r| = m`),
//! which is exactly the condition under which `B_r` on the merged face
//! splits `C_{r−1}` back off. [`MatchRule::Literal`] keeps the bare
//! comparison.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::combinatorics::{mask_elements, mask_of, Knapsack, Permutation, PointedComposition, PointedIntegerPartition};
use crate::complex::{build_lambda, sigma, Face, OrderedSetPartition, SimplicialComplex};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchDecision<F> {
    MatchedUp { partner: F, edge_type: usize },
    MatchedDown { partner: F, edge_type: usize },
    Critical,
}

impl<F> MatchDecision<F> {
    pub fn is_critical(&self) -> bool {
        matches!(self, MatchDecision::Critical)
    }
}

/// How `A_{r−1}` is evaluated; see the module documentation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum MatchRule {
    #[default]
    Consistent,
    Literal,
}

fn kappa_of(k: &Knapsack, s: usize, tau: &OrderedSetPartition) -> Result<usize> {
    k.kappa(s).map_err(|_| Error::FaceNotInComplex(format!("{tau} (block size {s} is not a sum of parts)")))
}

/// The `κ` smallest elements of a block, as a mask.
fn smallest(block: u64, count: usize) -> u64 {
    mask_of(mask_elements(block).take(count))
}

/// The rule applied to `τ`. `τ` must lie in `Λ_{λ,m̲}`; block sizes outside
/// the domain of `κ` are reported as `FaceNotInComplex`.
pub fn match_face(tau: &OrderedSetPartition, k: &Knapsack, m: usize) -> Result<MatchDecision<OrderedSetPartition>> {
    match_face_with(tau, k, m, MatchRule::Consistent)
}

pub fn match_face_with(
    tau: &OrderedSetPartition,
    k: &Knapsack,
    m: usize,
    rule: MatchRule,
) -> Result<MatchDecision<OrderedSetPartition>> {
    let blocks = tau.blocks();
    let r = blocks.len();
    let size = |i: usize| blocks[i].count_ones() as usize;
    let max_of = |b: u64| 64 - b.leading_zeros() as usize;
    // min of the empty block is +∞, so A_{r−1} holds vacuously when C_r = ∅
    let min_of = |b: u64| if b == 0 { usize::MAX } else { b.trailing_zeros() as usize + 1 };
    for j in 0..r.saturating_sub(1) {
        let kj = kappa_of(k, size(j), tau)?;
        let b = kj < size(j);
        let a = if j + 1 < r - 1 {
            max_of(blocks[j]) < min_of(blocks[j + 1]) && size(j) <= kappa_of(k, size(j + 1), tau)?
        } else {
            let slack = size(j + 1)
                .checked_sub(m)
                .ok_or_else(|| Error::FaceNotInComplex(format!("{tau} (last block smaller than {m})")))?;
            max_of(blocks[j]) < min_of(blocks[j + 1])
                && (rule == MatchRule::Literal || slack == 0 || size(j) <= kappa_of(k, slack, tau)?)
        };
        if b {
            return Ok(MatchDecision::MatchedUp { partner: tau.split(j, smallest(blocks[j], kj)), edge_type: j + 1 });
        }
        if a {
            return Ok(MatchDecision::MatchedDown { partner: tau.merge(j), edge_type: j + 1 });
        }
    }
    let last = size(r - 1);
    if last < m {
        return Err(Error::FaceNotInComplex(format!("{tau} (last block smaller than {m})")));
    }
    if last > m {
        let kr = kappa_of(k, last - m, tau)?;
        return Ok(MatchDecision::MatchedUp { partner: tau.split(r - 1, smallest(blocks[r - 1], kr)), edge_type: r });
    }
    Ok(MatchDecision::Critical)
}

/// A partial matching on the face poset of a complex, as a decision for
/// every face.
#[derive(Clone, Debug)]
pub struct MorseMatching<F: Face> {
    complex: SimplicialComplex<F>,
    decisions: BTreeMap<F, MatchDecision<F>>,
}

impl<F: Face> MorseMatching<F> {
    /// Matching from explicit `(lower, upper)` pairs; every other face is
    /// critical and edge types are 0.
    pub fn from_pairs(complex: SimplicialComplex<F>, pairs: &[(F, F)]) -> Result<Self> {
        let mut decisions: BTreeMap<F, MatchDecision<F>> =
            complex.all_faces().map(|f| (f.clone(), MatchDecision::Critical)).collect();
        for (lo, hi) in pairs {
            if !hi.boundary_terms().iter().any(|(g, _)| g == lo) {
                return Err(Error::NotInvolution(format!("{lo} is not a facet of {hi}")));
            }
            for f in [lo, hi] {
                match decisions.get(f) {
                    Some(MatchDecision::Critical) => {}
                    Some(_) => return Err(Error::NotInvolution(format!("{f} is matched twice"))),
                    None => return Err(Error::FaceNotInComplex(f.to_string())),
                }
            }
            decisions.insert(lo.clone(), MatchDecision::MatchedUp { partner: hi.clone(), edge_type: 0 });
            decisions.insert(hi.clone(), MatchDecision::MatchedDown { partner: lo.clone(), edge_type: 0 });
        }
        Ok(MorseMatching { complex, decisions })
    }

    pub fn complex(&self) -> &SimplicialComplex<F> {
        &self.complex
    }

    pub fn decision(&self, f: &F) -> Option<&MatchDecision<F>> {
        self.decisions.get(f)
    }

    pub fn decisions(&self) -> impl Iterator<Item = (&F, &MatchDecision<F>)> {
        self.decisions.iter()
    }

    /// Unmatched faces, sorted by dimension then face order.
    pub fn critical_cells(&self) -> Vec<F> {
        let mut out: Vec<F> = self.decisions.iter().filter(|(_, d)| d.is_critical()).map(|(f, _)| f.clone()).collect();
        out.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
        out
    }

    /// Faces whose decision is not mirrored by the partner's decision, or
    /// whose partner is not a face of the complex.
    pub fn involution_defects(&self) -> Vec<F> {
        self.decisions
            .iter()
            .filter(|(f, d)| match d {
                MatchDecision::Critical => false,
                MatchDecision::MatchedUp { partner, edge_type } => !matches!(
                    self.decisions.get(partner),
                    Some(MatchDecision::MatchedDown { partner: back, edge_type: t }) if back == *f && t == edge_type
                ),
                MatchDecision::MatchedDown { partner, edge_type } => !matches!(
                    self.decisions.get(partner),
                    Some(MatchDecision::MatchedUp { partner: back, edge_type: t }) if back == *f && t == edge_type
                ),
            })
            .map(|(f, _)| f.clone())
            .collect()
    }

    /// Matching pairs `(lower, upper, edge type)`.
    pub fn pairs(&self) -> Vec<(F, F, usize)> {
        self.decisions
            .iter()
            .filter_map(|(f, d)| match d {
                MatchDecision::MatchedUp { partner, edge_type } => Some((f.clone(), partner.clone(), *edge_type)),
                _ => None,
            })
            .collect()
    }

    /// `[{face, status, partner, edge_type}]`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .decisions
            .iter()
            .map(|(f, d)| match d {
                MatchDecision::MatchedUp { partner, edge_type } => serde_json::json!({
                    "face": f.to_string(), "status": "up", "partner": partner.to_string(), "edge_type": edge_type
                }),
                MatchDecision::MatchedDown { partner, edge_type } => serde_json::json!({
                    "face": f.to_string(), "status": "down", "partner": partner.to_string(), "edge_type": edge_type
                }),
                MatchDecision::Critical => serde_json::json!({
                    "face": f.to_string(), "status": "critical", "partner": null, "edge_type": null
                }),
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Every face of `Λ_{λ,m̲}` with its decision, without the involution check.
pub fn match_all(p: &PointedIntegerPartition, rule: MatchRule, caps: &Caps) -> Result<MorseMatching<OrderedSetPartition>> {
    let k = Knapsack::new(&p.lambda)?;
    let complex = build_lambda(p, caps)?;
    let faces: Vec<&OrderedSetPartition> = complex.all_faces().collect();
    let decided: Vec<(OrderedSetPartition, MatchDecision<OrderedSetPartition>)> =
        faces.par_iter().map(|f| match_face_with(f, &k, p.m, rule).map(|d| ((*f).clone(), d))).collect::<Result<_>>()?;
    let decisions = decided.into_iter().collect();
    Ok(MorseMatching { complex, decisions })
}

/// The matching on `Λ_{λ,m̲}`; fails unless it is an involution whose
/// partners all lie in `Λ`.
pub fn build_matching(p: &PointedIntegerPartition, caps: &Caps) -> Result<MorseMatching<OrderedSetPartition>> {
    let matching = match_all(p, MatchRule::Consistent, caps)?;
    if let Some(f) = matching.involution_defects().first() {
        return Err(Error::NotInvolution(f.to_string()));
    }
    Ok(matching)
}

/// Outcome of the acyclicity checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityReport {
    /// No directed cycle in the modified Hasse diagram.
    pub acyclic: bool,
    /// A directed cycle, when one exists, as display strings.
    pub cycle: Option<Vec<String>>,
    /// Edge types strictly decrease along every step `z ≺ u(z) ≻ z′ ≺ u(z′)`.
    /// Sufficient for acyclicity but not necessary.
    pub type_certificate: bool,
    /// The first step `[z, u(z), z′, u(z′)]` where the type does not drop.
    pub type_violation: Option<Vec<String>>,
}

impl AcyclicityReport {
    /// The certificate never claims acyclicity for a matching with a cycle.
    pub fn consistent(&self) -> bool {
        !self.type_certificate || self.acyclic
    }
}

/// Exhaustive cycle search on the Hasse diagram with matched edges
/// reversed (matched pairs point up, every other cover points down), plus
/// the edge-type monotonicity certificate.
pub fn verify_acyclic<F: Face>(m: &MorseMatching<F>) -> AcyclicityReport {
    let faces: Vec<&F> = m.complex.all_faces().collect();
    let id: HashMap<&F, usize> = faces.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); faces.len()];
    for (i, f) in faces.iter().enumerate() {
        let up_partner = match m.decisions.get(*f) {
            Some(MatchDecision::MatchedDown { partner, .. }) => Some(partner),
            _ => None,
        };
        for (g, _) in f.boundary_terms() {
            let j = id[&g];
            if up_partner == Some(&g) {
                succ[j].push(i);
            } else {
                succ[i].push(j);
            }
        }
    }
    let cycle = find_cycle(&succ).map(|c| c.into_iter().map(|i| faces[i].to_string()).collect());

    let mut violation = None;
    'outer: for (lo, hi, t) in m.pairs() {
        for (g, _) in hi.boundary_terms() {
            if g == lo {
                continue;
            }
            if let Some(MatchDecision::MatchedUp { partner, edge_type }) = m.decisions.get(&g) {
                if *edge_type >= t {
                    violation = Some(vec![lo.to_string(), hi.to_string(), g.to_string(), partner.to_string()]);
                    break 'outer;
                }
            }
        }
    }
    AcyclicityReport { acyclic: cycle.is_none(), cycle, type_certificate: violation.is_none(), type_violation: violation }
}

/// A directed cycle by iterative depth-first search, if any.
fn find_cycle(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = succ.len();
    let mut mark = vec![Mark::New; n];
    let mut parent = vec![usize::MAX; n];
    for start in 0..n {
        if mark[start] != Mark::New {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        mark[start] = Mark::Open;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next];
                *next += 1;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Open;
                        parent[w] = v;
                        stack.push((w, 0));
                    }
                    Mark::Open => {
                        let mut cycle = vec![w];
                        let mut u = v;
                        while u != w {
                            cycle.push(u);
                            u = parent[u];
                        }
                        cycle.reverse();
                        cycle.rotate_right(1);
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[v] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

/// `{σ(α, ε(d)) : d ∈ V(λ,m̲), Des(α) = d}`, sorted.
pub fn reconstruct_critical_cells(p: &PointedIntegerPartition, caps: &Caps) -> Result<Vec<OrderedSetPartition>> {
    let k = Knapsack::new(&p.lambda)?;
    let n = p.n();
    Caps::check(n, caps.beta, "descent enumeration")?;
    let mut cells = Vec::new();
    for d in k.v_set(p.m) {
        let eps = k.epsilon(&d, p.m)?;
        for alpha in Permutation::with_descent_composition(&d) {
            cells.push(sigma(&alpha, &eps)?);
        }
    }
    cells.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
    Ok(cells)
}

/// Critical cells of the matching, checked against the reconstruction.
pub fn critical_cells(
    m: &MorseMatching<OrderedSetPartition>,
    p: &PointedIntegerPartition,
    caps: &Caps,
) -> Result<Vec<OrderedSetPartition>> {
    let found = m.critical_cells();
    let expected = reconstruct_critical_cells(p, caps)?;
    if found != expected {
        let extra: Vec<String> = found.iter().filter(|f| !expected.contains(f)).map(|f| f.to_string()).collect();
        let missing: Vec<String> = expected.iter().filter(|f| !found.contains(f)).map(|f| f.to_string()).collect();
        return Err(Error::TheoremViolation(format!(
            "critical cells of {p}: unexpected [{}], missing [{}]",
            extra.join(", "),
            missing.join(", ")
        )));
    }
    Ok(found)
}

/// One row of the critical-cell table: `d`, `β(d)`, `ε(d)`, `W(d)` and the
/// cells `σ(α, ε(d))`.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalCellRow {
    pub d: PointedComposition,
    pub beta: usize,
    pub epsilon: PointedComposition,
    pub w: Vec<(PointedComposition, i64)>,
    pub cells: Vec<String>,
}

pub fn critical_cell_table(p: &PointedIntegerPartition, caps: &Caps) -> Result<Vec<CriticalCellRow>> {
    let k = Knapsack::new(&p.lambda)?;
    Caps::check(p.n(), caps.beta, "descent enumeration")?;
    k.v_set(p.m)
        .into_iter()
        .map(|d| {
            let epsilon = k.epsilon(&d, p.m)?;
            let w = k.w_set(&d, p.m)?;
            let cells: Vec<String> = Permutation::with_descent_composition(&d)
                .iter()
                .map(|a| sigma(a, &epsilon).map(|f| f.to_string()))
                .collect::<Result<_>>()?;
            Ok(CriticalCellRow { beta: cells.len(), d, epsilon, w, cells })
        })
        .collect()
}

/// Aligned text rendering of [`critical_cell_table`].
pub fn format_critical_cell_table(rows: &[CriticalCellRow]) -> String {
    let mut out = String::from("d\tbeta\tepsilon\tW\tcells\n");
    for r in rows {
        let w = r.w.iter().map(|(c, s)| format!("{}{c}", if *s < 0 { "-" } else { "+" })).join(" ");
        out.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.d, r.beta, r.epsilon, w, r.cells.join(", ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{reduced_homology, Simplex};

    fn osp(s: &str) -> OrderedSetPartition {
        s.parse().unwrap()
    }

    fn p211() -> PointedIntegerPartition {
        PointedIntegerPartition::new(vec![2, 1], 1)
    }

    #[test]
    fn rule_examples() {
        let k = Knapsack::new(&[2, 1]).unwrap();
        assert_eq!(match_face(&osp("1234"), &k, 1).unwrap(), MatchDecision::MatchedUp { partner: osp("1-234"), edge_type: 1 });
        assert_eq!(match_face(&osp("2-134"), &k, 1).unwrap(), MatchDecision::MatchedUp { partner: osp("2-13-4"), edge_type: 2 });
        assert_eq!(match_face(&osp("1-234"), &k, 1).unwrap(), MatchDecision::MatchedDown { partner: osp("1234"), edge_type: 1 });
        assert_eq!(match_face(&osp("2-14-3"), &k, 1).unwrap(), MatchDecision::Critical);
    }

    #[test]
    fn critical_cells_of_211() {
        let caps = Caps::default();
        let m = build_matching(&p211(), &caps).unwrap();
        let cells = critical_cells(&m, &p211(), &caps).unwrap();
        let mut names: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
        names.sort();
        let mut expected =
            vec!["2-14-3", "3-14-2", "3-24-1", "4-13-2", "4-23-1", "14-3-2", "24-3-1", "34-2-1", "12-4-3", "13-4-2", "23-4-1"];
        expected.sort();
        assert_eq!(names, expected);
        assert!(cells.iter().all(|c| c.dim() == 1));
        let report = verify_acyclic(&m);
        assert!(report.acyclic, "{report:?}");
        // Splitting C₁ and then merging C₂ ∪ C₃ raises the type.
        assert_eq!(report.type_violation, Some(vec!["234-1".into(), "2-34-1".into(), "2-134".into(), "2-13-4".into()]));
    }

    #[test]
    fn literal_rule_is_not_an_involution() {
        let m = match_all(&p211(), MatchRule::Literal, &Caps::default()).unwrap();
        let defects: Vec<String> = m.involution_defects().iter().map(|f| f.to_string()).collect();
        assert!(defects.contains(&"12-34".to_string()), "{defects:?}");
        let k = Knapsack::new(&[2, 1]).unwrap();
        assert_eq!(
            match_face_with(&osp("12-34"), &k, 1, MatchRule::Literal).unwrap(),
            MatchDecision::MatchedDown { partner: osp("1234"), edge_type: 1 }
        );
        assert_eq!(match_face(&osp("12-34"), &k, 1).unwrap(), MatchDecision::MatchedUp { partner: osp("12-3-4"), edge_type: 2 });
    }

    #[test]
    fn degenerate_filter() {
        let caps = Caps::default();
        let p = PointedIntegerPartition::new(vec![], 3);
        let m = build_matching(&p, &caps).unwrap();
        assert_eq!(m.critical_cells(), vec![osp("123")]);
    }

    #[test]
    fn two_part_filter_has_beta_many_vertices() {
        let caps = Caps::default();
        for (a, b) in [(3, 1), (2, 2), (1, 3), (4, 1)] {
            let p = PointedIntegerPartition::new(vec![a], b);
            let m = build_matching(&p, &caps).unwrap();
            let cells = critical_cells(&m, &p, &caps).unwrap();
            let beta = crate::combinatorics::beta(&PointedComposition::new(vec![a, b]).unwrap(), &caps).unwrap();
            assert_eq!(cells.len() as u64, beta);
            assert!(cells.iter().all(|c| c.dim() == 0));
        }
    }

    #[test]
    fn matching_counts_agree_with_homology() {
        let caps = Caps::default();
        let p = PointedIntegerPartition::new(vec![2, 2], 1);
        let m = build_matching(&p, &caps).unwrap();
        let cells = critical_cells(&m, &p, &caps).unwrap();
        let h = reduced_homology(m.complex());
        assert!(h.is_concentrated(1, cells.len()));
        assert!(verify_acyclic(&m).acyclic);
    }

    #[test]
    fn square_cycle_is_detected() {
        let s = |v: &[u32]| Simplex::new(v.to_vec());
        let square = SimplicialComplex::from_facets([s(&[0, 1]), s(&[1, 2]), s(&[2, 3]), s(&[0, 3])]);
        let pairs = [(s(&[0]), s(&[0, 1])), (s(&[1]), s(&[1, 2])), (s(&[2]), s(&[2, 3])), (s(&[3]), s(&[0, 3]))];
        let m = MorseMatching::from_pairs(square.clone(), &pairs).unwrap();
        let report = verify_acyclic(&m);
        assert!(!report.acyclic);
        assert!(report.cycle.as_ref().unwrap().len() >= 4);
        assert!(report.consistent());
        let empty = MorseMatching::from_pairs(square, &[]).unwrap();
        assert!(verify_acyclic(&empty).acyclic);
    }

    #[test]
    fn from_pairs_rejects_non_matchings() {
        let s = |v: &[u32]| Simplex::new(v.to_vec());
        let edge = SimplicialComplex::from_facets([s(&[0, 1])]);
        assert!(MorseMatching::from_pairs(edge.clone(), &[(s(&[0]), s(&[0, 1])), (s(&[1]), s(&[0, 1]))]).is_err());
        assert!(MorseMatching::from_pairs(edge, &[(s(&[]), s(&[0, 1]))]).is_err());
    }
}
