use std::collections::{HashMap, HashSet};

use super::{sigma_inverse, Face, OrderedSetPartition, SimplicialComplex};
use crate::error::{Error, Result};

/// Result of checking a facet order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShellingOutcome {
    /// The order is a shelling; positions of the spanning facets (those
    /// attached along their whole boundary).
    Shelling { spanning: Vec<usize> },
    /// Position of the first facet whose intersection with the earlier ones
    /// is not pure of codimension one.
    Fails { index: usize },
}

impl ShellingOutcome {
    pub fn is_shelling(&self) -> bool {
        matches!(self, ShellingOutcome::Shelling { .. })
    }
}

/// Incremental state: ridges already present and, per vertex, the facets
/// containing it.
struct ShellState<V> {
    ridges: HashSet<Vec<V>>,
    placed: Vec<HashSet<V>>,
    by_vertex: HashMap<V, Vec<usize>>,
}

impl<V: Clone + Eq + std::hash::Hash + Ord> ShellState<V> {
    fn new() -> Self {
        ShellState { ridges: HashSet::new(), placed: Vec::new(), by_vertex: HashMap::new() }
    }

    /// The restriction `R(F)`: vertices `v` with `F ∖ v` already present.
    /// `None` when `F` cannot come next.
    fn restriction(&self, facet: &[V]) -> Option<Vec<V>> {
        if self.placed.is_empty() {
            return Some(Vec::new());
        }
        let r: Vec<V> = (0..facet.len())
            .filter(|&i| {
                let mut ridge = facet.to_vec();
                ridge.remove(i);
                self.ridges.contains(&ridge)
            })
            .map(|i| facet[i].clone())
            .collect();
        if r.is_empty() {
            return None;
        }
        // The new part is a shelling step iff R(F) lies in no earlier facet.
        let pivot = r.iter().min_by_key(|v| self.by_vertex.get(*v).map_or(0, Vec::len)).expect("nonempty");
        let contained =
            self.by_vertex.get(pivot).is_some_and(|js| js.iter().any(|&j| r.iter().all(|v| self.placed[j].contains(v))));
        if contained {
            None
        } else {
            Some(r)
        }
    }

    fn place(&mut self, facet: &[V]) {
        let j = self.placed.len();
        for i in 0..facet.len() {
            let mut ridge = facet.to_vec();
            ridge.remove(i);
            self.ridges.insert(ridge);
            self.by_vertex.entry(facet[i].clone()).or_default().push(j);
        }
        self.placed.push(facet.iter().cloned().collect());
    }
}

fn check_order<F: Face>(k: &SimplicialComplex<F>, order: &[F]) -> Result<()> {
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    let facets = k.facets();
    if order.len() != facets.len() {
        return Err(Error::ShapeMismatch(format!("order lists {} facets, complex has {}", order.len(), facets.len())));
    }
    let wanted: HashSet<&F> = facets.iter().collect();
    let mut seen = HashSet::new();
    for f in order {
        if !wanted.contains(f) || !seen.insert(f) {
            return Err(Error::FaceNotInComplex(format!("{f} is not a distinct facet")));
        }
    }
    Ok(())
}

/// Checks that `order` (a permutation of the facets of the pure complex `k`)
/// is a shelling.
pub fn verify_shelling<F: Face>(k: &SimplicialComplex<F>, order: &[F]) -> Result<ShellingOutcome> {
    check_order(k, order)?;
    let mut state = ShellState::new();
    let mut spanning = Vec::new();
    for (i, f) in order.iter().enumerate() {
        let vs = f.vertices();
        match state.restriction(&vs) {
            None => return Ok(ShellingOutcome::Fails { index: i }),
            Some(r) => {
                if r.len() == vs.len() {
                    spanning.push(i);
                }
            }
        }
        state.place(&vs);
    }
    Ok(ShellingOutcome::Shelling { spanning })
}

/// Facets of an ordered-set-partition complex sorted by the word of `σ⁻¹`.
pub fn lex_sigma_inverse_order(k: &SimplicialComplex<OrderedSetPartition>) -> Vec<OrderedSetPartition> {
    let mut facets = k.facets();
    facets.sort_by_cached_key(|f| sigma_inverse(f).word().to_vec());
    facets
}

/// Depth-first search for a shelling order, trying facets in their sorted
/// order and giving up after `budget` placements.
pub fn find_shelling_order<F: Face>(k: &SimplicialComplex<F>, budget: usize) -> Result<Option<Vec<F>>> {
    if !k.is_pure() {
        return Err(Error::NotPure);
    }
    let facets = k.facets();
    let verts: Vec<Vec<F::Vertex>> = facets.iter().map(Face::vertices).collect();
    let mut used = vec![false; facets.len()];
    let mut path: Vec<usize> = Vec::new();
    let mut spent = 0usize;

    fn go<V: Clone + Eq + std::hash::Hash + Ord>(
        verts: &[Vec<V>],
        used: &mut [bool],
        path: &mut Vec<usize>,
        spent: &mut usize,
        budget: usize,
    ) -> bool {
        if path.len() == verts.len() {
            return true;
        }
        let mut state = ShellState::new();
        for &j in path.iter() {
            state.place(&verts[j]);
        }
        let candidates: Vec<usize> = (0..verts.len()).filter(|&i| !used[i] && state.restriction(&verts[i]).is_some()).collect();
        for i in candidates {
            *spent += 1;
            if *spent > budget {
                return false;
            }
            used[i] = true;
            path.push(i);
            if go(verts, used, path, spent, budget) {
                return true;
            }
            path.pop();
            used[i] = false;
        }
        false
    }

    if go(&verts, &mut used, &mut path, &mut spent, budget) {
        Ok(Some(path.into_iter().map(|i| facets[i].clone()).collect()))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_delta_c, Simplex};
    use crate::Caps;

    fn complex(facets: &[&[u32]]) -> SimplicialComplex<Simplex> {
        SimplicialComplex::from_facets(facets.iter().map(|f| Simplex::new(f.to_vec())))
    }

    #[test]
    fn single_facet() {
        let k = complex(&[&[0, 1, 2]]);
        let out = verify_shelling(&k, &k.facets()).unwrap();
        assert_eq!(out, ShellingOutcome::Shelling { spanning: vec![] });
        let empty = SimplicialComplex::from_facets([Simplex::empty()]);
        assert_eq!(verify_shelling(&empty, &empty.facets()).unwrap(), ShellingOutcome::Shelling { spanning: vec![0] });
    }

    #[test]
    fn disjoint_edges_fail_at_the_second_facet() {
        let k = complex(&[&[0, 1], &[2, 3]]);
        assert_eq!(verify_shelling(&k, &k.facets()).unwrap(), ShellingOutcome::Fails { index: 1 });
        assert_eq!(find_shelling_order(&k, 1000).unwrap(), None);
    }

    #[test]
    fn order_matters() {
        // path 0-1-2-3 listed with a gap
        let k = complex(&[&[0, 1], &[1, 2], &[2, 3]]);
        let bad = vec![Simplex::new(vec![0, 1]), Simplex::new(vec![2, 3]), Simplex::new(vec![1, 2])];
        assert_eq!(verify_shelling(&k, &bad).unwrap(), ShellingOutcome::Fails { index: 1 });
        assert!(verify_shelling(&k, &k.facets()).unwrap().is_shelling());
        let circle = complex(&[&[0, 1], &[1, 2], &[0, 2]]);
        let out = verify_shelling(&circle, &circle.facets()).unwrap();
        assert_eq!(out, ShellingOutcome::Shelling { spanning: vec![2] });
    }

    #[test]
    fn bad_orders_are_rejected() {
        let k = complex(&[&[0, 1], &[1, 2]]);
        assert!(verify_shelling(&k, &k.facets()[..1]).is_err());
        let mixed = complex(&[&[0, 1], &[2]]);
        assert!(matches!(verify_shelling(&mixed, &mixed.facets()), Err(Error::NotPure)));
    }

    #[test]
    fn lex_order_shells_delta_121() {
        let k = build_delta_c(&"1,2,1".parse().unwrap(), &Caps::default()).unwrap();
        let order = lex_sigma_inverse_order(&k);
        match verify_shelling(&k, &order).unwrap() {
            ShellingOutcome::Shelling { spanning } => assert_eq!(spanning.len(), 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn search_finds_an_order_when_given_a_bad_start() {
        let k = complex(&[&[0, 1], &[2, 3], &[1, 2]]);
        let order = find_shelling_order(&k, 1000).unwrap().unwrap();
        assert!(verify_shelling(&k, &order).unwrap().is_shelling());
    }
}
