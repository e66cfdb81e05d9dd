use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::smith::{invariant_factors, torsion_of};
use super::{Face, SimplicialComplex};

/// Reduced integer homology, dimension by dimension.
///
/// `betti[d]` and `torsion[d]` describe `H̃_d` for `d = 0..=top`;
/// `betti_minus_one` is the rank of `H̃_{−1}`, which is 1 exactly for the
/// complex `{∅}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<u64>>,
    pub betti_minus_one: usize,
}

impl HomologyProfile {
    pub fn betti_at(&self, dim: isize) -> usize {
        match dim {
            -1 => self.betti_minus_one,
            d if d >= 0 => self.betti.get(d as usize).copied().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn torsion_at(&self, dim: isize) -> &[u64] {
        if dim < 0 {
            return &[];
        }
        self.torsion.get(dim as usize).map_or(&[], Vec::as_slice)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }

    /// Every reduced group vanishes.
    pub fn is_acyclic(&self) -> bool {
        self.betti_minus_one == 0 && self.betti.iter().all(|&b| b == 0) && self.is_torsion_free()
    }

    /// Free of rank `rank` in dimension `dim`, zero elsewhere, no torsion.
    pub fn is_concentrated(&self, dim: isize, rank: usize) -> bool {
        self.is_torsion_free()
            && (-1..=self.betti.len() as isize).all(|d| self.betti_at(d) == if d == dim { rank } else { 0 })
            && (dim < self.betti.len() as isize || rank == 0)
    }

    /// Reduced Euler characteristic `Σ (−1)^d b̃_d`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        let mut chi = -(self.betti_minus_one as i64);
        for (d, &b) in self.betti.iter().enumerate() {
            chi += if d % 2 == 0 { b as i64 } else { -(b as i64) };
        }
        chi
    }

    /// The Betti numbers with trailing zeros removed, for comparing complexes
    /// of different dimension.
    pub fn trimmed_betti(&self) -> Vec<usize> {
        let mut b = self.betti.clone();
        while b.last() == Some(&0) {
            b.pop();
        }
        b
    }
}

/// Reduced homology from the Smith normal forms of the augmented boundary
/// maps. Boundary matrices of different dimensions are reduced in parallel.
pub fn reduced_homology<F: Face>(k: &SimplicialComplex<F>) -> HomologyProfile {
    let top = k.dim();
    if top < -1 {
        return HomologyProfile { betti: Vec::new(), torsion: Vec::new(), betti_minus_one: 0 };
    }
    // factors[d + 1] = invariant factors of ∂_d : C_d → C_{d−1}, d = 0..=top
    let dims: Vec<isize> = (0..=top).collect();
    let factors: Vec<_> = dims.par_iter().map(|&d| invariant_factors(&k.boundary_matrix(d))).collect();
    let rank_of = |d: isize| if d >= 0 && d <= top { factors[d as usize].len() } else { 0 };
    let size = |d: isize| k.faces(d).len();
    let betti_minus_one = size(-1) - rank_of(0);
    let mut betti = Vec::new();
    let mut torsion = Vec::new();
    for d in 0..=top {
        betti.push(size(d) - rank_of(d) - rank_of(d + 1));
        torsion.push(if d < top { torsion_of(&factors[(d + 1) as usize]) } else { Vec::new() });
    }
    HomologyProfile { betti, torsion, betti_minus_one }
}
