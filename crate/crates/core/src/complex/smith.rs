//! Exact integer rank and invariant factors of sparse matrices.
//!
//! Elimination first consumes every `±1` pivot it can find (rows visited
//! shortest first, pivot column with the fewest entries), which handles
//! almost all of a boundary matrix without growth. What is left is reduced
//! to Smith normal form densely over big integers. The sparse phase runs in
//! checked `i64` and restarts in `BigInt` if an entry would overflow.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rows of `(column, value)` pairs with strictly increasing columns and no
/// zero values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    /// Entries in any order; duplicates are summed, zeros dropped.
    pub fn push_row(&mut self, mut entries: Vec<(usize, i64)>) {
        entries.sort_unstable_by_key(|e| e.0);
        let mut row: Vec<(usize, i64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!(c < self.ncols, "column {c} out of range");
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| e.1 != 0);
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
}

trait Coeff: Clone + Debug + PartialEq {
    fn from_i64(v: i64) -> Self;
    fn vanishes(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `self − factor·other`, `None` on overflow.
    fn sub_mul(&self, factor: &Self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl Coeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(&self, factor: &Self, other: &Self) -> Option<Self> {
        self.checked_sub(factor.checked_mul(*other)?)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn sub_mul(&self, factor: &Self, other: &Self) -> Option<Self> {
        Some(self - factor * other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

/// Result of the unit-pivot phase: the number of unit pivots and the
/// residual rows (still sparse, no unit entries).
fn unit_elimination<T: Coeff>(m: &SparseMatrix) -> Result<(usize, Vec<Vec<(usize, T)>>), Overflow> {
    let mut rows: Vec<Vec<(usize, T)>> = m.rows.iter().map(|r| r.iter().map(|&(c, v)| (c, T::from_i64(v))).collect()).collect();
    let mut alive = vec![true; rows.len()];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m.ncols];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r {
            col_rows[c].push(i);
        }
    }
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        rows.iter().enumerate().filter(|(_, r)| !r.is_empty()).map(|(i, r)| Reverse((r.len(), i))).collect();
    let mut pivots = 0;
    while let Some(Reverse((len, r))) = heap.pop() {
        if !alive[r] || rows[r].len() != len || len == 0 {
            continue;
        }
        let Some(&(pc, ref pv)) = rows[r].iter().filter(|(_, v)| v.is_unit()).min_by_key(|(c, _)| col_rows[*c].len()) else {
            continue;
        };
        let pv = pv.clone();
        alive[r] = false;
        pivots += 1;
        let pivot_row = std::mem::take(&mut rows[r]);
        let targets = std::mem::take(&mut col_rows[pc]);
        for i in targets {
            if i == r || !alive[i] {
                continue;
            }
            let Ok(pos) = rows[i].binary_search_by_key(&pc, |e| e.0) else { continue };
            // pv is ±1, so pv is its own inverse.
            let factor = rows[i][pos].1.mul(&pv).ok_or(Overflow)?;
            let merged = sub_rows(&rows[i], &factor, &pivot_row)?;
            for &(c, _) in &merged {
                if c != pc && rows[i].binary_search_by_key(&c, |e| e.0).is_err() {
                    col_rows[c].push(i);
                }
            }
            rows[i] = merged;
            if !rows[i].is_empty() {
                heap.push(Reverse((rows[i].len(), i)));
            }
        }
    }
    let residual = rows.into_iter().zip(alive).filter(|(r, a)| *a && !r.is_empty()).map(|(r, _)| r).collect();
    Ok((pivots, residual))
}

fn sub_rows<T: Coeff>(a: &[(usize, T)], factor: &T, b: &[(usize, T)]) -> Result<Vec<(usize, T)>, Overflow> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let zero = T::from_i64(0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (c, v) = if ca < cb {
            i += 1;
            (ca, a[i - 1].1.clone())
        } else if cb < ca {
            j += 1;
            (cb, zero.sub_mul(factor, &b[j - 1].1).ok_or(Overflow)?)
        } else {
            i += 1;
            j += 1;
            (ca, a[i - 1].1.sub_mul(factor, &b[j - 1].1).ok_or(Overflow)?)
        };
        if !v.vanishes() {
            out.push((c, v));
        }
    }
    Ok(out)
}

/// Non-zero invariant factors of a dense matrix, in divisibility order.
pub fn dense_invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut factors = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Smallest non-zero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut settled = true;
        for i in t + 1..nrows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&a[t][t]);
            for j in t..ncols {
                let delta = &q * &a[t][j];
                a[i][j] -= delta;
            }
            if !a[i][t].is_zero() {
                settled = false;
            }
        }
        for j in t + 1..ncols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&a[t][t]);
            for i in t..nrows {
                let delta = &q * &a[i][t];
                a[i][j] -= delta;
            }
            if !a[t][j].is_zero() {
                settled = false;
            }
        }
        if !settled {
            continue;
        }
        // The pivot must divide the rest of the block; otherwise fold an
        // offending row into the pivot row and go again.
        let offending = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
        if let Some(i) = offending {
            for j in t..ncols {
                let v = a[i][j].clone();
                a[t][j] += v;
            }
            continue;
        }
        factors.push(a[t][t].abs());
        t += 1;
    }
    factors
}

/// Non-zero invariant factors of `m`, in divisibility order. Their count is
/// the rank.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    match unit_elimination::<i64>(m) {
        Ok((units, residual)) => finish(units, residual),
        Err(Overflow) => match unit_elimination::<BigInt>(m) {
            Ok((units, residual)) => finish(units, residual),
            Err(Overflow) => unreachable!("big integers do not overflow"),
        },
    }
}

fn finish<T: Coeff>(units: usize, residual: Vec<Vec<(usize, T)>>) -> Vec<BigInt> {
    let mut cols: Vec<usize> = residual.iter().flatten().map(|e| e.0).collect();
    cols.sort_unstable();
    cols.dedup();
    let dense: Vec<Vec<BigInt>> = residual
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); cols.len()];
            for (c, v) in r {
                row[cols.binary_search(c).expect("collected")] = v.to_bigint();
            }
            row
        })
        .collect();
    let mut factors = vec![BigInt::one(); units];
    factors.extend(dense_invariant_factors(dense));
    factors
}

pub fn rank(m: &SparseMatrix) -> usize {
    invariant_factors(m).len()
}

/// Torsion part (factors above 1) as machine integers.
pub(crate) fn torsion_of(factors: &[BigInt]) -> Vec<u64> {
    factors.iter().filter(|f| !f.is_one()).map(|f| f.to_u64().expect("torsion coefficient fits in u64")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[i64]]) -> SparseMatrix {
        let mut m = SparseMatrix::new(rows.first().map_or(0, |r| r.len()));
        for r in rows {
            m.push_row(r.iter().enumerate().map(|(c, &v)| (c, v)).collect());
        }
        m
    }

    #[test]
    fn diagonal_factors() {
        let m = matrix(&[&[2, 0], &[0, 3]]);
        assert_eq!(invariant_factors(&m), vec![BigInt::from(1), BigInt::from(6)]);
        let m = matrix(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        assert_eq!(invariant_factors(&m), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn rank_deficient() {
        let m = matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&SparseMatrix::new(4)), 0);
        let m = matrix(&[&[0, 0], &[0, 0]]);
        assert_eq!(rank(&m), 0);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX / 2;
        let m = matrix(&[&[1, big, 0], &[big, 1, big], &[0, big, 1]]);
        let dense: Vec<Vec<BigInt>> =
            [[1, big, 0], [big, 1, big], [0, big, 1]].iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        assert_eq!(invariant_factors(&m), dense_invariant_factors(dense));
        assert_eq!(rank(&m), 3);
    }

    #[test]
    fn torsion_is_reported() {
        let m = matrix(&[&[1, 1], &[1, -1]]);
        assert_eq!(invariant_factors(&m), vec![BigInt::from(1), BigInt::from(2)]);
        assert_eq!(torsion_of(&invariant_factors(&m)), vec![2]);
    }
}
