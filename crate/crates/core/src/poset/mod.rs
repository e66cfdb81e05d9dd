//! Finite posets and the pointed partition lattice with its restricted
//! subposets.

mod pointed;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

pub use pointed::{
    build_divisible_partition_lattice, build_filter_pi_lambda_m, build_pointed_partition_lattice, build_subposet_pi_c,
    filter_contains_type, PartitionPoset, PointedSetPartition,
};

/// A finite poset stored as up-set bitsets over its elements.
///
/// Elements are kept in a linear extension: `x < y` implies
/// `index(x) < index(y)`.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    labels: Vec<String>,
    up: Vec<FixedBitSet>,
    covers: Vec<(usize, usize)>,
}

/// JSON form: element labels and cover pairs `(lower, upper)` by index.
#[derive(Clone, Debug, Serialize)]
pub struct PosetExport {
    pub elements: Vec<String>,
    pub covers: Vec<[usize; 2]>,
}

impl FinitePoset {
    /// Builds the poset from a comparison predicate, which must be a partial
    /// order. `perm[i]` of the returned vector gives the new index of input
    /// element `i`.
    pub fn from_leq(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<(Self, Vec<usize>)> {
        let n = labels.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..n {
                if leq(i, j) {
                    row.insert(j);
                }
            }
            if !row.contains(i) {
                return Err(Error::NotAPoset(format!("{} is not below itself", labels[i])));
            }
        }
        for i in 0..n {
            for j in up[i].ones() {
                if j != i && up[j].contains(i) {
                    return Err(Error::NotAPoset(format!("{} and {} are mutually below each other", labels[i], labels[j])));
                }
            }
        }
        Ok(Self::reorder(labels, up))
    }

    /// Builds the poset generated by cover pairs `(lower, upper)`; the pairs
    /// may be redundant but must not form a cycle.
    pub fn from_covers(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in relations {
            succ[a].push(b);
            indeg[b] += 1;
        }
        let mut topo = Vec::with_capacity(n);
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(v) = stack.pop() {
            topo.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if topo.len() != n {
            return Err(Error::NotAPoset("cover relation has a cycle".into()));
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &v in topo.iter().rev() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(v);
            for &w in &succ[v] {
                set.union_with(&up[w]);
            }
            up[v] = set;
        }
        Ok(Self::reorder(labels, up).0)
    }

    fn reorder(labels: Vec<String>, up: Vec<FixedBitSet>) -> (Self, Vec<usize>) {
        let n = labels.len();
        // larger up-sets first is a linear extension
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(up[i].count_ones(..)), i));
        let mut new_index = vec![0; n];
        for (k, &i) in order.iter().enumerate() {
            new_index[i] = k;
        }
        let mut new_up = vec![FixedBitSet::with_capacity(n); n];
        for (i, set) in up.iter().enumerate() {
            for j in set.ones() {
                new_up[new_index[i]].insert(new_index[j]);
            }
        }
        let new_labels = order.iter().map(|&i| labels[i].clone()).collect();
        let covers = compute_covers(&new_up);
        (FinitePoset { labels: new_labels, up: new_up, covers }, new_index)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// `{j : i ≤ j}`.
    pub fn up_set(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.up[i].count_ones(..) == self.len())
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.leq(j, i)))
    }

    /// The subposet induced on `keep` (indices into `self`), in the given order.
    pub fn induced(&self, keep: &[usize]) -> FinitePoset {
        let labels = keep.iter().map(|&i| self.labels[i].clone()).collect();
        FinitePoset::from_leq(labels, |a, b| self.leq(keep[a], keep[b])).expect("restriction of a partial order").0
    }

    /// Removes one element.
    pub fn without(&self, i: usize) -> FinitePoset {
        let keep: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        self.induced(&keep)
    }

    /// Adjoins a new minimum.
    pub fn with_bottom(&self, label: &str) -> FinitePoset {
        let mut labels = vec![label.to_string()];
        labels.extend(self.labels.iter().cloned());
        FinitePoset::from_leq(labels, |a, b| a == 0 || (b > 0 && self.leq(a - 1, b - 1))).expect("adjoining a bottom").0
    }

    /// Adjoins a new maximum.
    pub fn with_top(&self, label: &str) -> FinitePoset {
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        FinitePoset::from_leq(labels, |a, b| b == n || (a < n && self.leq(a, b))).expect("adjoining a top").0
    }

    /// `μ(x, y)` for every `y`, by `μ(x,y) = −Σ_{x ≤ z < y} μ(x,z)`.
    pub fn mobius_from(&self, x: usize) -> Vec<i64> {
        let n = self.len();
        let mut mu = vec![0i64; n];
        mu[x] = 1;
        for y in x + 1..n {
            if !self.leq(x, y) {
                continue;
            }
            let mut s = 0;
            for z in x..y {
                if mu[z] != 0 && self.leq(z, y) {
                    s += mu[z];
                }
            }
            mu[y] = -s;
        }
        mu
    }

    /// `μ(0̂, 1̂)`.
    pub fn mobius(&self) -> Result<i64> {
        let bottom = self.minimum().ok_or(Error::Unbounded("minimum"))?;
        let top = self.maximum().ok_or(Error::Unbounded("maximum"))?;
        Ok(self.mobius_from(bottom)[top])
    }

    /// Least upper bound, if one exists.
    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        let mut ub = self.up[i].clone();
        ub.intersect_with(&self.up[j]);
        ub.ones().find(|&u| ub.is_subset(&self.up[u]))
    }

    /// Greatest lower bound, if one exists.
    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len()).filter(|&z| self.leq(z, i) && self.leq(z, j)).collect();
        lower.iter().copied().find(|&l| lower.iter().all(|&z| self.leq(z, l)))
    }

    /// A pair without a join or without a meet, if any.
    pub fn lattice_witness(&self) -> Option<(usize, usize)> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.join(i, j).is_none() || self.meet(i, j).is_none() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_lattice(&self) -> bool {
        self.lattice_witness().is_none()
    }

    /// Chains of the poset as simplices on element indices, empty chain included.
    pub fn order_complex(&self) -> SimplicialComplex<Simplex> {
        let mut faces = vec![Simplex::empty()];
        let mut chain = Vec::new();
        fn extend(p: &FinitePoset, chain: &mut Vec<u32>, faces: &mut Vec<Simplex>) {
            let last = *chain.last().expect("nonempty") as usize;
            for next in p.up[last].ones().filter(|&j| j != last) {
                chain.push(next as u32);
                faces.push(Simplex::new(chain.clone()));
                extend(p, chain, faces);
                chain.pop();
            }
        }
        for i in 0..self.len() {
            chain.push(i as u32);
            faces.push(Simplex::new(chain.clone()));
            extend(self, &mut chain, &mut faces);
            chain.pop();
        }
        SimplicialComplex::from_faces(faces).expect("chains are closed under subsets")
    }

    pub fn export(&self) -> PosetExport {
        PosetExport { elements: self.labels.clone(), covers: self.covers.iter().map(|&(a, b)| [a, b]).collect() }
    }

    /// Reflexive, antisymmetric and transitive; used to audit constructions.
    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            self.leq(i, i)
                && self.up[i].ones().all(|j| (j == i || !self.leq(j, i)) && self.up[j].is_subset(&self.up[i]) && j >= i)
        })
    }
}

fn compute_covers(up: &[FixedBitSet]) -> Vec<(usize, usize)> {
    let n = up.len();
    let mut covers = Vec::new();
    for i in 0..n {
        let mut strict = up[i].clone();
        strict.set(i, false);
        let mut reach = FixedBitSet::with_capacity(n);
        // indices increase along the order, so lower candidates come first
        for j in strict.ones() {
            if !reach.contains(j) {
                covers.push((i, j));
                reach.union_with(&up[j]);
            }
        }
    }
    covers.sort_unstable();
    covers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::reduced_homology;

    fn chain(len: usize) -> FinitePoset {
        let labels = (0..=len).map(|i| i.to_string()).collect();
        FinitePoset::from_leq(labels, |a, b| a <= b).unwrap().0
    }

    fn boolean(k: usize) -> FinitePoset {
        let labels = (0..1usize << k).map(|i| format!("{i:b}")).collect();
        FinitePoset::from_leq(labels, |a, b| a & !b == 0).unwrap().0
    }

    #[test]
    fn mobius_of_chains_and_boolean_algebras() {
        assert_eq!(chain(1).mobius().unwrap(), -1);
        assert_eq!(chain(3).mobius().unwrap(), 0);
        for k in 0..5 {
            assert_eq!(boolean(k).mobius().unwrap(), if k % 2 == 0 { 1 } else { -1 });
        }
        let antichain = FinitePoset::from_leq(vec!["a".into(), "b".into()], |a, b| a == b).unwrap().0;
        assert!(matches!(antichain.mobius(), Err(Error::Unbounded(_))));
    }

    #[test]
    fn covers_are_transitively_reduced() {
        let b = boolean(3);
        assert_eq!(b.covers().len(), 12);
        assert!(b.is_partial_order());
        let redundant = FinitePoset::from_covers(vec!["x".into(), "y".into(), "z".into()], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(redundant.covers(), &[(0, 1), (1, 2)]);
        assert!(FinitePoset::from_covers(vec!["x".into(), "y".into()], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn order_complex_examples() {
        let antichain = FinitePoset::from_leq((0..4).map(|i| i.to_string()).collect(), |a, b| a == b).unwrap().0;
        assert_eq!(antichain.order_complex().f_vector(), vec![1, 4]);
        let c = chain(3).order_complex();
        assert_eq!(c.f_vector(), vec![1, 4, 6, 4, 1]);
        assert_eq!(c.facets().len(), 1);
    }

    /// Hall: the reduced Euler characteristic of the open interval is `μ`.
    #[test]
    fn hall_theorem_on_boolean_algebras() {
        for k in 1..5 {
            let b = boolean(k);
            let bottom = b.minimum().unwrap();
            let top = b.maximum().unwrap();
            let open = b.without(top).without(bottom);
            let chi = reduced_homology(&open.order_complex()).reduced_euler_characteristic();
            assert_eq!(chi, b.mobius().unwrap());
        }
    }

    #[test]
    fn lattice_checks() {
        assert!(boolean(3).is_lattice());
        // two minimal upper bounds: bowtie with bounds
        let labels = ["0", "a", "b", "c", "d", "1"].iter().map(|s| s.to_string()).collect();
        let below = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)];
        let p = FinitePoset::from_covers(labels, &below).unwrap();
        let (i, j) = p.lattice_witness().unwrap();
        let mut pair = [p.label(i), p.label(j)];
        pair.sort();
        assert!(pair == ["a", "b"] || pair == ["c", "d"]);
    }

    #[test]
    fn adjoining_bounds() {
        let antichain = FinitePoset::from_leq(vec!["a".into(), "b".into()], |a, b| a == b).unwrap().0;
        let bounded = antichain.with_bottom("0").with_top("1");
        assert_eq!(bounded.len(), 4);
        assert_eq!(bounded.mobius().unwrap(), 1);
        assert_eq!(bounded.label(bounded.minimum().unwrap()), "0");
    }
}
