//! Border strips, tableaux and tabloids, the explicit top-homology cycles
//! `g_α` and `g_{α,d}`, and the symmetric-group checks built on them.

mod cycles;
mod specht;

use std::fmt;

use serde::Serialize;

use crate::combinatorics::{mask_elements, mask_of, Permutation, PointedComposition};
use crate::complex::OrderedSetPartition;
use crate::error::{Error, Result};

pub use cycles::{
    build_sigma_alpha, build_sigma_alpha_d, column_stabilizer, cycle_g_alpha, cycle_g_alpha_d, relabel_chain, row_stabilizer,
    verify_cycle_basis, verify_knapsack_cycle_basis, CycleBasisReport,
};
pub use specht::{
    count_standard_tableaux, group_action_closure, polytabloid, psi, psi_equivariance_defect, psi_of_polytabloid,
    verify_psi_images, ClosureReport, PsiCheck,
};

/// The border strip of a composition `c` with `c_k > 0`: `k` rows, the
/// `i`-th from below holding `c_i` boxes, each row starting directly above
/// the last box of the row below. Boxes are labelled `1..n` from southwest
/// to northeast, so row `i` carries the labels `R_i` and the columns carry
/// the intervals `K_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorderStrip {
    composition: PointedComposition,
    /// `(row, column)` of box `i + 1`, rows counted from below.
    boxes: Vec<(usize, usize)>,
}

impl BorderStrip {
    pub fn new(c: &PointedComposition) -> Result<Self> {
        if !c.has_positive_last() {
            return Err(Error::TrailingZero(c.to_string()));
        }
        let mut boxes = Vec::with_capacity(c.n());
        let mut start = 0;
        for (row, &len) in c.parts().iter().enumerate() {
            boxes.extend((0..len).map(|x| (row, start + x)));
            start += len - 1;
        }
        Ok(BorderStrip { composition: c.clone(), boxes })
    }

    pub fn composition(&self) -> &PointedComposition {
        &self.composition
    }

    pub fn n(&self) -> usize {
        self.boxes.len()
    }

    pub fn boxes(&self) -> &[(usize, usize)] {
        &self.boxes
    }

    /// Box labels of each row, bottom to top.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.lines(|&(r, _)| r)
    }

    /// Box labels of each column, left to right, each read bottom to top.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        self.lines(|&(_, c)| c)
    }

    fn lines(&self, key: impl Fn(&(usize, usize)) -> usize) -> Vec<Vec<usize>> {
        let count = self.boxes.iter().map(&key).max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (i, b) in self.boxes.iter().enumerate() {
            out[key(b)].push(i + 1);
        }
        out
    }

    /// No two boxes share a position, consecutive boxes are adjacent, and
    /// no 2×2 square occurs.
    pub fn is_valid(&self) -> bool {
        let adjacent = self.boxes.windows(2).all(|w| {
            let ((r0, c0), (r1, c1)) = (w[0], w[1]);
            (r1 == r0 && c1 == c0 + 1) || (r1 == r0 + 1 && c1 == c0)
        });
        let square =
            self.boxes.iter().any(|&(r, c)| [(r + 1, c), (r, c + 1), (r + 1, c + 1)].iter().all(|p| self.boxes.contains(p)));
        adjacent && !square
    }
}

impl fmt::Display for BorderStrip {
    /// Top row first; `□` for a box.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.composition.len();
        for r in (0..rows).rev() {
            let cols: Vec<usize> = self.boxes.iter().filter(|b| b.0 == r).map(|b| b.1).collect();
            let line: String = (0..=*cols.last().unwrap_or(&0)).map(|c| if cols.contains(&c) { '□' } else { ' ' }).collect();
            writeln!(f, "{}", line.trim_end())?;
        }
        Ok(())
    }
}

/// A filling of a border strip with `1..n`; `entries[i]` sits in box `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    strip: BorderStrip,
    entries: Vec<usize>,
}

impl Tableau {
    pub fn new(strip: BorderStrip, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != strip.n() {
            return Err(Error::SizeMismatch { left: entries.len(), right: strip.n() });
        }
        Permutation::new(entries.clone())?;
        Ok(Tableau { strip, entries })
    }

    /// Fill the boxes in reading order with the word of `α`.
    pub fn from_permutation(alpha: &Permutation, c: &PointedComposition) -> Result<Self> {
        if alpha.len() != c.n() {
            return Err(Error::SizeMismatch { left: alpha.len(), right: c.n() });
        }
        Ok(Tableau { strip: BorderStrip::new(c)?, entries: alpha.word().to_vec() })
    }

    /// Read the boxes southwest to northeast.
    pub fn permutation(&self) -> Permutation {
        Permutation::new(self.entries.clone()).expect("entries form a bijection")
    }

    pub fn strip(&self) -> &BorderStrip {
        &self.strip
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Rows increase left to right and every box is smaller than the one
    /// directly below it.
    pub fn is_standard(&self) -> bool {
        let e = |label: usize| self.entries[label - 1];
        let rows_ok = self.strip.rows().iter().all(|r| r.windows(2).all(|w| e(w[0]) < e(w[1])));
        let cols_ok = self.strip.columns().iter().all(|c| c.windows(2).all(|w| e(w[1]) < e(w[0])));
        rows_ok && cols_ok
    }

    pub fn tabloid(&self) -> Tabloid {
        let rows = self.strip.rows().iter().map(|r| mask_of(r.iter().map(|&l| self.entries[l - 1]))).collect();
        Tabloid { strip: self.strip.clone(), rows }
    }
}

/// A tableau up to permuting entries within rows: the row sets, bottom row
/// first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tabloid {
    strip: BorderStrip,
    rows: Vec<u64>,
}

impl std::hash::Hash for BorderStrip {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.composition.hash(state);
    }
}

impl PartialOrd for BorderStrip {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BorderStrip {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.composition.cmp(&other.composition)
    }
}

impl Tabloid {
    pub fn new(strip: BorderStrip, rows: Vec<Vec<usize>>) -> Result<Self> {
        let sizes: Vec<usize> = rows.iter().map(Vec::len).collect();
        if sizes != strip.composition.parts() {
            return Err(Error::ShapeMismatch(format!("row sizes {sizes:?} do not match {}", strip.composition)));
        }
        let f = OrderedSetPartition::from_sets(strip.n(), &rows)?;
        Ok(Tabloid { strip, rows: f.blocks().to_vec() })
    }

    /// Rows become blocks, lowest row first.
    pub fn facet(&self) -> OrderedSetPartition {
        OrderedSetPartition::new(self.strip.n(), self.rows.clone()).expect("rows partition [n]")
    }

    pub fn from_facet(f: &OrderedSetPartition) -> Result<Self> {
        let strip = BorderStrip::new(&f.type_composition())?;
        Ok(Tabloid { strip, rows: f.blocks().to_vec() })
    }

    pub fn strip(&self) -> &BorderStrip {
        &self.strip
    }

    pub fn row(&self, i: usize) -> Vec<usize> {
        mask_elements(self.rows[i]).collect()
    }

    /// The permutation reading each row in increasing order, bottom row first.
    pub fn row_sorted_reading(&self) -> Permutation {
        Permutation::new(self.rows.iter().flat_map(|&r| mask_elements(r)).collect()).expect("rows partition [n]")
    }

    /// `ω · s`.
    pub fn relabel(&self, omega: &Permutation) -> Tabloid {
        Tabloid { strip: self.strip.clone(), rows: self.facet().relabel(omega).blocks().to_vec() }
    }

    /// All tabloids of the given strip.
    pub fn all(strip: &BorderStrip) -> Vec<Tabloid> {
        OrderedSetPartition::all_of_type(&strip.composition)
            .into_iter()
            .map(|f| Tabloid { strip: strip.clone(), rows: f.blocks().to_vec() })
            .collect()
    }
}

impl fmt::Display for Tabloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.facet())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::sigma;

    fn comp(s: &str) -> PointedComposition {
        s.parse().unwrap()
    }

    #[test]
    fn strip_of_23113() {
        let b = BorderStrip::new(&comp("2,3,1,1,3")).unwrap();
        assert!(b.is_valid());
        assert_eq!(b.rows(), vec![vec![1, 2], vec![3, 4, 5], vec![6], vec![7], vec![8, 9, 10]]);
        assert_eq!(b.columns(), vec![vec![1], vec![2, 3], vec![4], vec![5, 6, 7, 8], vec![9], vec![10]]);
        let k = comp("2,3,1,1,3").interval_decomposition().unwrap();
        let cols: Vec<Vec<usize>> = k.columns.iter().map(|r| r.clone().collect()).collect();
        assert_eq!(b.columns(), cols);
    }

    #[test]
    fn trivial_strips() {
        let row = BorderStrip::new(&comp("4")).unwrap();
        assert_eq!(row.rows(), vec![vec![1, 2, 3, 4]]);
        let col = BorderStrip::new(&comp("1,1,1")).unwrap();
        assert_eq!(col.columns(), vec![vec![1, 2, 3]]);
        assert!(BorderStrip::new(&comp("2,0")).is_err());
    }

    #[test]
    fn strips_are_valid_and_match_intervals() {
        for n in 1..=7 {
            for c in PointedComposition::all_positive(n) {
                let b = BorderStrip::new(&c).unwrap();
                assert!(b.is_valid(), "{c}");
                let k = c.interval_decomposition().unwrap();
                let rows: Vec<Vec<usize>> = k.rows.iter().map(|r| r.clone().collect()).collect();
                let cols: Vec<Vec<usize>> = k.columns.iter().map(|r| r.clone().collect()).collect();
                assert_eq!(b.rows(), rows);
                assert_eq!(b.columns(), cols);
            }
        }
    }

    #[test]
    fn ten_box_tableau_and_tabloid() {
        let c = comp("2,3,1,1,3");
        let alpha: Permutation = "5 7 4 10 8 1 3 6 2 9".parse().unwrap();
        let t = Tableau::from_permutation(&alpha, &c).unwrap();
        assert_eq!(t.entries(), &[5, 7, 4, 10, 8, 1, 3, 6, 2, 9]);
        assert_eq!(t.permutation(), alpha);
        let strip = BorderStrip::new(&c).unwrap();
        let s = Tabloid::new(strip, vec![vec![9, 5], vec![1, 6, 4], vec![10], vec![2], vec![7, 3, 8]]).unwrap();
        assert_eq!(s.facet().to_string(), "5 9-1 4 6-10-2-3 7 8");
        assert_eq!(Tabloid::from_facet(&s.facet()).unwrap(), s);
    }

    #[test]
    fn bijections_round_trip() {
        for c in PointedComposition::all_positive(4) {
            for alpha in Permutation::all(4) {
                let t = Tableau::from_permutation(&alpha, &c).unwrap();
                assert_eq!(t.permutation(), alpha);
                assert_eq!(sigma(&alpha, &c).unwrap(), t.tabloid().facet());
            }
        }
        let strip = BorderStrip::new(&comp("1,2,1")).unwrap();
        let all = Tabloid::all(&strip);
        assert_eq!(all.len(), 12);
        for s in all {
            assert_eq!(Tabloid::from_facet(&s.facet()).unwrap(), s);
        }
        let single = Tabloid::all(&BorderStrip::new(&comp("3")).unwrap());
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].facet(), OrderedSetPartition::whole(3));
    }

    #[test]
    fn shape_mismatches_are_rejected() {
        let strip = BorderStrip::new(&comp("1,2")).unwrap();
        assert!(Tabloid::new(strip.clone(), vec![vec![1, 2], vec![3]]).is_err());
        assert!(Tableau::new(strip, vec![1, 2]).is_err());
        assert!(Tableau::from_permutation(&"12".parse().unwrap(), &comp("1,2")).is_err());
    }
}
