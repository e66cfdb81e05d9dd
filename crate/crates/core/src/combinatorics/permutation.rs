use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::PointedComposition;
use crate::error::{Error, Result};

/// A permutation of `[n]` in one-line notation `α = α₁⋯αₙ`.
///
/// Composition follows `(α∘γ)(i) = α(γ(i))`, so a right factor `γ` rearranges
/// the positions of the word of `α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    word: Vec<usize>,
}

impl Permutation {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &v in &word {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(word));
            }
            seen[v] = true;
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { word: (1..=n).collect() }
    }

    /// The longest element `n ⋯ 2 1`.
    pub fn reversal(n: usize) -> Self {
        Permutation { word: (1..=n).rev().collect() }
    }

    /// The adjacent transposition `(i, i+1)` for `1 ≤ i < n`.
    pub fn adjacent_transposition(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "adjacent transposition ({i},{}) outside S_{n}", i + 1);
        let mut word: Vec<usize> = (1..=n).collect();
        word.swap(i - 1, i);
        Permutation { word }
    }

    /// All of `S_n` in lexicographic order of the word.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (1..=n).permutations(n).map(|word| Permutation { word })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Value at the 1-based position `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.word[i - 1]
    }

    /// `self ∘ right`: the word of `self` read in the order given by `right`.
    pub fn compose(&self, right: &Permutation) -> Permutation {
        assert_eq!(self.len(), right.len(), "composing permutations of different sizes");
        Permutation { word: right.word.iter().map(|&i| self.word[i - 1]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut word = vec![0; self.len()];
        for (pos, &v) in self.word.iter().enumerate() {
            word[v - 1] = pos + 1;
        }
        Permutation { word }
    }

    pub fn inversion_count(&self) -> usize {
        let w = &self.word;
        (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
    }

    pub fn sign(&self) -> i64 {
        if self.inversion_count().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Value pairs `(a, b)` with `a < b` where `b` appears before `a`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let w = &self.word;
        let mut out = Vec::new();
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    out.push((w[j], w[i]));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Positions `i ∈ [n-1]` with `αᵢ > αᵢ₊₁`.
    pub fn descent_set(&self) -> Vec<usize> {
        self.word.windows(2).enumerate().filter(|(_, w)| w[0] > w[1]).map(|(i, _)| i + 1).collect()
    }

    pub fn descent_composition(&self) -> PointedComposition {
        let n = self.len();
        let mut parts = Vec::new();
        let mut last = 0;
        for s in self.descent_set() {
            parts.push(s - last);
            last = s;
        }
        parts.push(n - last);
        PointedComposition::from_parts_unchecked(parts)
    }

    /// Right weak Bruhat order: containment of inversion sets. Permutations of
    /// different sizes are incomparable.
    pub fn weak_bruhat_leq(&self, other: &Permutation) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let pos = other.inverse();
        let w = &self.word;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                // w[i] before w[j] with w[i] > w[j] must stay inverted in `other`.
                if w[i] > w[j] && pos.word[w[i] - 1] > pos.word[w[j] - 1] {
                    return false;
                }
            }
        }
        true
    }

    /// Permutations with descent composition exactly `c`.
    pub fn with_descent_composition(c: &PointedComposition) -> Vec<Permutation> {
        if !c.has_positive_last() {
            return Vec::new();
        }
        Permutation::all(c.n()).filter(|a| &a.descent_composition() == c).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.len() > 9 { " " } else { "" };
        write!(f, "{}", self.word.iter().join(sep))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `2143`, `2 1 4 3` or `2,1,4,3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let word: Vec<usize> = if s.contains(|c: char| c == ',' || c.is_whitespace()) {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad permutation entry {t:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Parse(format!("bad digit {c:?}"))))
                .collect::<Result<_>>()?
        };
        Permutation::new(word)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(word: Vec<usize>) -> Result<Self> {
        Permutation::new(word)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.word
    }
}
