use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use itertools::Itertools;
use serde_json::{Map, Value};

/// A face of an abstract simplicial complex, in whatever encoding is natural
/// for the complex at hand.
///
/// `boundary_terms` lists the codimension-one faces with their incidence
/// signs, using the reduced convention: a vertex has the empty face as its
/// boundary with coefficient `+1`, and the empty face has no boundary.
pub trait Face: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync {
    type Vertex: Clone + Ord + Hash + fmt::Debug + Send + Sync;

    /// `−1` for the empty face.
    fn dim(&self) -> isize;

    fn boundary_terms(&self) -> Vec<(Self, i64)>;

    /// Sorted vertex set. Faces of a complex are determined by their vertices.
    fn vertices(&self) -> Vec<Self::Vertex>;
}

/// A simplex on integer vertex labels, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn new(mut vertices: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub fn empty() -> Self {
        Simplex(Vec::new())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

impl Face for Simplex {
    type Vertex = u32;

    fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    fn boundary_terms(&self) -> Vec<(Self, i64)> {
        (0..self.0.len())
            .map(|i| {
                let mut rest = self.0.clone();
                rest.remove(i);
                (Simplex(rest), if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    fn vertices(&self) -> Vec<u32> {
        self.0.clone()
    }
}

/// A finite integer combination of faces of one dimension. Zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainElement<F: Face> {
    dim: isize,
    coefficients: BTreeMap<F, i64>,
}

impl<F: Face> ChainElement<F> {
    pub fn zero(dim: isize) -> Self {
        ChainElement { dim, coefficients: BTreeMap::new() }
    }

    pub fn from_face(face: F) -> Self {
        let mut x = ChainElement::zero(face.dim());
        x.add_term(face, 1);
        x
    }

    /// Panics if `face` has the wrong dimension.
    pub fn add_term(&mut self, face: F, coefficient: i64) {
        assert_eq!(face.dim(), self.dim, "face {face} does not have dimension {}", self.dim);
        if coefficient == 0 {
            return;
        }
        let entry = self.coefficients.entry(face.clone()).or_insert(0);
        *entry += coefficient;
        if *entry == 0 {
            self.coefficients.remove(&face);
        }
    }

    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, face: &F) -> i64 {
        self.coefficients.get(face).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&F, i64)> {
        self.coefficients.iter().map(|(f, &c)| (f, c))
    }

    pub fn boundary(&self) -> ChainElement<F> {
        let mut out = ChainElement::zero(self.dim - 1);
        for (face, c) in self.terms() {
            for (g, s) in face.boundary_terms() {
                out.add_term(g, c * s);
            }
        }
        out
    }

    pub fn scaled(&self, factor: i64) -> ChainElement<F> {
        let mut out = ChainElement::zero(self.dim);
        for (f, c) in self.terms() {
            out.add_term(f.clone(), c * factor);
        }
        out
    }

    pub fn add(&mut self, other: &ChainElement<F>) {
        for (f, c) in other.terms() {
            self.add_term(f.clone(), c);
        }
    }

    /// `{face: coefficient}` keyed by the faces' display strings.
    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self.terms().map(|(f, c)| (f.to_string(), Value::from(c))).collect();
        Value::Object(map)
    }
}

impl<F: Face> fmt::Display for ChainElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (face, c)) in self.terms().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let sep = if i > 0 { " " } else { "" };
            let magnitude = if c.abs() == 1 { String::new() } else { format!("{}*", c.abs()) };
            let gap = if i > 0 { " " } else { "" };
            write!(f, "{sep}{sign}{gap}{magnitude}[{face}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_boundary_squares_to_zero() {
        let s = Simplex::new(vec![3, 1, 2, 7]);
        assert_eq!(s.dim(), 3);
        let x = ChainElement::from_face(s);
        assert_eq!(x.boundary().len(), 4);
        assert!(x.boundary().boundary().is_zero());
    }

    #[test]
    fn vertex_boundary_is_augmentation() {
        let v = ChainElement::from_face(Simplex::new(vec![5]));
        let b = v.boundary();
        assert_eq!(b.dim(), -1);
        assert_eq!(b.coefficient(&Simplex::empty()), 1);
        assert!(ChainElement::from_face(Simplex::empty()).boundary().is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut x = ChainElement::zero(1);
        x.add_term(Simplex::new(vec![1, 2]), 2);
        x.add_term(Simplex::new(vec![1, 2]), -2);
        assert!(x.is_zero());
        assert_eq!(x.to_string(), "0");
    }
}
