//! Simplicial complexes, chains and reduced integer homology, with the
//! ordered-set-partition complexes `Δ_c` and `Λ_{λ,m̲}`.

mod builders;
mod face;
mod homology;
mod osp;
mod shelling;
pub mod smith;

use std::collections::{BTreeMap, HashMap, HashSet};

pub use builders::{build_delta_c, build_lambda, build_lambda_unchecked, sigma, sigma_inverse};
pub use face::{ChainElement, Face, Simplex};
pub use homology::{reduced_homology, HomologyProfile};
pub(crate) use osp::parse_block;
pub use osp::OrderedSetPartition;
pub use shelling::{find_shelling_order, lex_sigma_inverse_order, verify_shelling, ShellingOutcome};
use smith::SparseMatrix;

use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// A finite abstract simplicial complex given by its faces, grouped by
/// dimension and sorted. A non-void complex always contains the empty face.
#[derive(Clone, Debug)]
pub struct SimplicialComplex<F: Face> {
    faces: BTreeMap<isize, Vec<F>>,
    index: HashMap<F, usize>,
}

impl<F: Face> SimplicialComplex<F> {
    /// The downward closure of `generators`.
    pub fn from_facets(generators: impl IntoIterator<Item = F>) -> Self {
        let mut seen: HashSet<F> = HashSet::new();
        let mut stack: Vec<F> = Vec::new();
        for g in generators {
            if seen.insert(g.clone()) {
                stack.push(g);
            }
        }
        while let Some(f) = stack.pop() {
            for (g, _) in f.boundary_terms() {
                if seen.insert(g.clone()) {
                    stack.push(g);
                }
            }
        }
        Self::assemble(seen)
    }

    /// Exactly the given faces; fails unless the family is closed.
    pub fn from_faces(faces: impl IntoIterator<Item = F>) -> Result<Self> {
        let all: HashSet<F> = faces.into_iter().collect();
        for f in &all {
            for (g, _) in f.boundary_terms() {
                if !all.contains(&g) {
                    return Err(Error::NotClosed(g.to_string()));
                }
            }
        }
        Ok(Self::assemble(all))
    }

    fn assemble(all: HashSet<F>) -> Self {
        let mut faces: BTreeMap<isize, Vec<F>> = BTreeMap::new();
        for f in all {
            faces.entry(f.dim()).or_default().push(f);
        }
        let mut index = HashMap::new();
        for list in faces.values_mut() {
            list.sort();
            for (i, f) in list.iter().enumerate() {
                index.insert(f.clone(), i);
            }
        }
        SimplicialComplex { faces, index }
    }

    /// Top dimension; `−2` for the void complex.
    pub fn dim(&self) -> isize {
        self.faces.keys().next_back().copied().unwrap_or(-2)
    }

    pub fn faces(&self, dim: isize) -> &[F] {
        self.faces.get(&dim).map_or(&[], Vec::as_slice)
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &F> {
        self.faces.values().flatten()
    }

    pub fn num_faces(&self) -> usize {
        self.index.len()
    }

    /// `(f₋₁, f₀, …, f_top)`.
    pub fn f_vector(&self) -> Vec<usize> {
        if self.faces.is_empty() {
            return Vec::new();
        }
        (-1..=self.dim()).map(|d| self.faces(d).len()).collect()
    }

    pub fn contains(&self, f: &F) -> bool {
        self.index.contains_key(f)
    }

    /// Position of `f` within `faces(f.dim())`.
    pub fn position(&self, f: &F) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Faces that are not a boundary face of another face, sorted.
    pub fn facets(&self) -> Vec<F> {
        let mut covered: HashSet<&F> = HashSet::new();
        let mut bounds = Vec::new();
        for f in self.all_faces() {
            bounds.extend(f.boundary_terms().into_iter().map(|(g, _)| g));
        }
        for g in &bounds {
            if let Some((k, _)) = self.index.get_key_value(g) {
                covered.insert(k);
            }
        }
        let mut out: Vec<F> = self.all_faces().filter(|f| !covered.contains(f)).cloned().collect();
        out.sort_by(|a, b| (a.dim(), a).cmp(&(b.dim(), b)));
        out
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets().iter().all(|f| f.dim() == d)
    }

    /// Matrix of `∂_d : C_d → C_{d−1}`, one row per `d`-face.
    pub fn boundary_matrix(&self, dim: isize) -> SparseMatrix {
        let target = self.faces(dim - 1);
        let mut m = SparseMatrix::new(target.len());
        for f in self.faces(dim) {
            let entries = f
                .boundary_terms()
                .into_iter()
                .map(|(g, s)| (self.position(&g).expect("complex is closed under faces"), s))
                .collect();
            m.push_row(entries);
        }
        m
    }

    /// `F ∪ {apex}` is a face for every face `F`.
    pub fn is_cone(&self, apex: &F::Vertex) -> Result<bool> {
        let by_vertices: HashSet<Vec<F::Vertex>> = self.all_faces().map(Face::vertices).collect();
        if !by_vertices.contains(&vec![apex.clone()]) {
            return Err(Error::NotAVertex(format!("{apex:?}")));
        }
        Ok(by_vertices.iter().all(|vs| {
            let mut with = vs.clone();
            if let Err(pos) = with.binary_search(apex) {
                with.insert(pos, apex.clone());
            }
            by_vertices.contains(&with)
        }))
    }

    /// Face poset of the non-empty faces.
    pub fn face_poset(&self) -> FinitePoset {
        let nonempty: Vec<&F> = self.all_faces().filter(|f| f.dim() >= 0).collect();
        let pos: HashMap<&F, usize> = nonempty.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut covers = Vec::new();
        for (i, f) in nonempty.iter().enumerate() {
            if f.dim() >= 1 {
                for (g, _) in f.boundary_terms() {
                    covers.push((pos[&g], i));
                }
            }
        }
        FinitePoset::from_covers(nonempty.iter().map(|f| f.to_string()).collect(), &covers)
            .expect("face relation is a partial order")
    }

    /// Order complex of the face poset of the non-empty faces.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex<Simplex> {
        self.face_poset().order_complex()
    }
}

impl SimplicialComplex<OrderedSetPartition> {
    /// The same complex with elements relabelled by `omega`.
    pub fn relabel(&self, omega: &crate::combinatorics::Permutation) -> Self {
        Self::assemble(self.all_faces().map(|f| f.relabel(omega)).collect())
    }

    /// Faces as display strings, grouped by dimension from `−1` up.
    pub fn to_json(&self) -> serde_json::Value {
        let by_dim: Vec<serde_json::Value> =
            (-1..=self.dim()).map(|d| self.faces(d).iter().map(|f| f.to_string()).collect()).collect();
        serde_json::json!({ "dim": self.dim(), "faces": by_dim })
    }
}
