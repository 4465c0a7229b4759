//! Multi-indices in `Z_+^d`, graded enumeration and multinomial weights.

use std::collections::HashMap;
use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Z_+^d`, indexing the monomial `z^α`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("multi-index must have dimension d >= 1"));
        }
        Ok(MultiIndex(entries))
    }

    pub fn zero(d: usize) -> Self {
        assert!(d >= 1, "dimension must be positive");
        MultiIndex(vec![0; d])
    }

    /// The unit index `ε_j` (0-based `j`).
    pub fn unit(d: usize, j: usize) -> Self {
        let mut e = Self::zero(d);
        e.0[j] = 1;
        e
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ α_j`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `α! = Π α_j!`.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// The multinomial weight `|α|!/α!`.
    pub fn multinomial_weight(&self) -> BigInt {
        factorial(self.order()) / self.factorial()
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_dim(other)?;
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Componentwise difference; `None` unless `other <= self` componentwise.
    pub fn sub(&self, other: &MultiIndex) -> Result<Option<MultiIndex>> {
        self.check_dim(other)?;
        Ok(self.checked_sub_unchecked_dim(other))
    }

    pub(crate) fn checked_sub_unchecked_dim(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// `α + ε_j`.
    pub fn bump(&self, j: usize) -> MultiIndex {
        let mut out = self.clone();
        out.0[j] += 1;
        out
    }

    /// `α − ε_j`, if defined.
    pub fn lower(&self, j: usize) -> Option<MultiIndex> {
        if self.0[j] == 0 {
            return None;
        }
        let mut out = self.clone();
        out.0[j] -= 1;
        Some(out)
    }

    /// Componentwise sum; panics on dimension mismatch. Internal fast path.
    pub(crate) fn plus(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn check_dim(&self, other: &MultiIndex) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for MultiIndex {
    type Output = u32;
    fn index(&self, j: usize) -> &u32 {
        &self.0[j]
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `|γ|!/γ!` as an exact integer.
pub fn multinomial_weight(gamma: &MultiIndex) -> BigInt {
    gamma.multinomial_weight()
}

/// All indices of order exactly `k` in dimension `d`, lexicographically descending.
pub fn enumerate_grade(d: usize, k: u32) -> Vec<MultiIndex> {
    assert!(d >= 1, "dimension must be positive");
    let mut out = Vec::new();
    let mut current = vec![0u32; d];
    fill_grade(&mut current, 0, k, &mut out);
    out
}

fn fill_grade(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    let d = current.len();
    if pos == d - 1 {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        current[pos] = a;
        fill_grade(current, pos + 1, remaining - a, out);
    }
}

/// All `α` with `|α| <= n`, graded, lexicographically descending within each grade.
/// The length is `C(n + d, d)`.
pub fn enumerate_upto(d: usize, n: u32) -> Vec<MultiIndex> {
    (0..=n).flat_map(|k| enumerate_grade(d, k)).collect()
}

/// A graded monomial basis with reverse lookup.
#[derive(Clone, Debug)]
pub struct Basis {
    d: usize,
    degree: u32,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.degree == other.degree
    }
}

impl Basis {
    pub fn new(d: usize, degree: u32) -> Self {
        let indices = enumerate_upto(d, degree);
        let lookup = indices
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        Basis {
            d,
            degree,
            indices,
            lookup,
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn get(&self, i: usize) -> &MultiIndex {
        &self.indices[i]
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    /// Number of basis elements of degree `<= w`; these form a prefix.
    pub fn prefix_len(&self, w: u32) -> usize {
        binomial(w + self.d as u32, self.d as u32)
            .try_into()
            .expect("basis size fits in usize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    // Count words over the alphabet {1..d} whose letter multiset is γ.
    fn count_words(gamma: &[u32]) -> u64 {
        fn rec(rem: &mut Vec<u32>) -> u64 {
            if rem.iter().all(|&r| r == 0) {
                return 1;
            }
            let mut total = 0;
            for j in 0..rem.len() {
                if rem[j] > 0 {
                    rem[j] -= 1;
                    total += rec(rem);
                    rem[j] += 1;
                }
            }
            total
        }
        rec(&mut gamma.to_vec())
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(mi(&[1, 1]).multinomial_weight(), BigInt::from(2));
        assert_eq!(mi(&[2, 0, 0]).multinomial_weight(), BigInt::from(1));
        assert_eq!(count_words(&[2, 1]), 3);
        assert_eq!(mi(&[2, 1]).multinomial_weight(), BigInt::from(3));
    }

    #[test]
    fn multinomial_matches_word_count() {
        for g in enumerate_upto(3, 5) {
            assert_eq!(g.multinomial_weight(), BigInt::from(count_words(g.entries())));
        }
    }

    #[test]
    fn multinomial_theorem() {
        for d in 1..=4usize {
            for k in 0..=6u32 {
                let total: BigInt = enumerate_grade(d, k)
                    .iter()
                    .map(|g| g.multinomial_weight())
                    .sum();
                assert_eq!(total, BigInt::from(d).pow(k));
            }
        }
    }

    #[test]
    fn large_factorials_are_exact() {
        let g = mi(&[20, 20]);
        assert_eq!(g.multinomial_weight(), binomial(40, 20));
        assert_eq!(binomial(40, 20), BigInt::from(137_846_528_820u64));
    }

    #[test]
    fn enumeration_examples() {
        let e = enumerate_upto(2, 2);
        assert_eq!(e.len(), 6);
        assert_eq!(
            e,
            vec![
                mi(&[0, 0]),
                mi(&[1, 0]),
                mi(&[0, 1]),
                mi(&[2, 0]),
                mi(&[1, 1]),
                mi(&[0, 2])
            ]
        );
        let e1: Vec<u32> = enumerate_upto(1, 3).iter().map(|a| a[0]).collect();
        assert_eq!(e1, vec![0, 1, 2, 3]);
        assert_eq!(enumerate_upto(3, 1).len(), 4);
    }

    #[test]
    fn enumeration_is_graded_and_sized() {
        for d in 1..=4usize {
            for n in 0..=5u32 {
                let e = enumerate_upto(d, n);
                assert_eq!(BigInt::from(e.len()), binomial(n + d as u32, d as u32));
                assert!(e.windows(2).all(|w| w[0].order() <= w[1].order()));
                let b = Basis::new(d, n);
                for w in 0..=n {
                    assert!(b.indices()[..b.prefix_len(w)].iter().all(|a| a.order() <= w));
                }
            }
        }
    }

    #[test]
    fn add_and_sub() {
        assert_eq!(mi(&[1, 0]).add(&mi(&[0, 1])).unwrap(), mi(&[1, 1]));
        assert_eq!(mi(&[1, 0]).sub(&mi(&[0, 1])).unwrap(), None);
        assert_eq!(mi(&[2, 1]).sub(&mi(&[1, 1])).unwrap(), Some(mi(&[1, 0])));
        assert!(mi(&[1, 0]).add(&mi(&[1, 0, 0])).is_err());
        assert!(MultiIndex::new(vec![]).is_err());
    }
}
