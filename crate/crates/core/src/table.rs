//! Block tables indexed by pairs of multi-indices over a graded basis.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{psd_exact, CMatrix, PsdCheck};
use crate::multiindex::{Basis, MultiIndex};
use crate::scalar::{cr, ComplexRational, Exact};

/// How the blocks of a table relate to a Gram matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    /// Block `(α, β)` has entries `⟨e_{α,i}, e_{β,j}⟩`; the flattened table
    /// is itself a Gram matrix.
    Gram,
    /// Block `(α, β)` is `φ(α, β)`, e.g. `∫ ζ^α ζ̄^β dF`. The associated
    /// Gram matrix has entries `φ(α, β)_{j,i}`.
    Moment,
}

/// A table `(α, β) ↦ r×r` block for `|α|, |β| ≤ N`, stored flattened with
/// row index `pos(α)·r + i` (graded, lex-descending within each grade).
#[derive(Clone, Debug, PartialEq)]
pub struct GramTable {
    basis: Basis,
    block: usize,
    kind: TableKind,
    matrix: CMatrix,
}

impl GramTable {
    pub fn from_matrix(d: usize, degree: u32, block: usize, kind: TableKind, matrix: CMatrix) -> Result<Self> {
        if d == 0 || block == 0 {
            return Err(Error::invalid("d and block size must be positive"));
        }
        let basis = Basis::new(d, degree);
        let n = basis.len() * block;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.rows(),
            });
        }
        Ok(GramTable {
            basis,
            block,
            kind,
            matrix,
        })
    }

    pub fn from_scalar_fn(
        d: usize,
        degree: u32,
        kind: TableKind,
        mut f: impl FnMut(&MultiIndex, &MultiIndex) -> ComplexRational,
    ) -> Self {
        let basis = Basis::new(d, degree);
        let idx = basis.indices().to_vec();
        let matrix = CMatrix::from_fn(idx.len(), idx.len(), |a, b| f(&idx[a], &idx[b]));
        GramTable {
            basis,
            block: 1,
            kind,
            matrix,
        }
    }

    pub fn from_blocks(
        d: usize,
        degree: u32,
        block: usize,
        kind: TableKind,
        mut f: impl FnMut(&MultiIndex, &MultiIndex) -> CMatrix,
    ) -> Self {
        let basis = Basis::new(d, degree);
        let n = basis.len();
        let mut matrix = CMatrix::zeros(n * block, n * block);
        for a in 0..n {
            for b in 0..n {
                let m = f(basis.get(a), basis.get(b));
                assert_eq!((m.rows(), m.cols()), (block, block), "block shape");
                for i in 0..block {
                    for j in 0..block {
                        matrix[(a * block + i, b * block + j)] = m[(i, j)].clone();
                    }
                }
            }
        }
        GramTable {
            basis,
            block,
            kind,
            matrix,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree()
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// The flattened table in its stored layout.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn index(&self, alpha: &MultiIndex, i: usize) -> Option<usize> {
        self.basis.position(alpha).map(|p| p * self.block + i)
    }

    pub fn entry(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Option<CMatrix> {
        let a = self.basis.position(alpha)?;
        let b = self.basis.position(beta)?;
        let r = self.block;
        Some(CMatrix::from_fn(r, r, |i, j| self.matrix[(a * r + i, b * r + j)].clone()))
    }

    /// Entry `(α, β)` of a scalar table.
    pub fn scalar(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Option<&ComplexRational> {
        debug_assert_eq!(self.block, 1);
        let a = self.basis.position(alpha)?;
        let b = self.basis.position(beta)?;
        Some(&self.matrix[(a, b)])
    }

    /// The table restricted to `|α|, |β| ≤ w`.
    pub fn restrict(&self, w: u32) -> Result<GramTable> {
        if w > self.degree() {
            return Err(Error::Window(format!("cannot restrict degree {} table to {}", self.degree(), w)));
        }
        let n = self.basis.prefix_len(w) * self.block;
        GramTable::from_matrix(self.dim(), w, self.block, self.kind, self.matrix.leading(n))
    }

    pub fn with_kind(mut self, kind: TableKind) -> Self {
        self.kind = kind;
        self
    }

    /// The Gram matrix of the table: the stored matrix for `Gram` tables,
    /// block-transposed for `Moment` tables.
    pub fn gram_matrix(&self) -> CMatrix {
        match self.kind {
            TableKind::Gram => self.matrix.clone(),
            TableKind::Moment => block_transpose(&self.matrix, self.block),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.is_hermitian()
    }

    /// Exact positive-semidefiniteness of the Gram matrix.
    pub fn check_psd(&self) -> Result<PsdCheck> {
        psd_exact(&self.gram_matrix())
    }

    /// The first nonzero block off the diagonal `α = β`, if any.
    pub fn off_diagonal(&self) -> Option<(MultiIndex, MultiIndex)> {
        let r = self.block;
        for a in 0..self.basis.len() {
            for b in 0..self.basis.len() {
                if a == b {
                    continue;
                }
                let nonzero = (0..r).any(|i| (0..r).any(|j| !self.matrix[(a * r + i, b * r + j)].is_zero()));
                if nonzero {
                    return Some((self.basis.get(a).clone(), self.basis.get(b).clone()));
                }
            }
        }
        None
    }

    pub fn is_diagonal(&self) -> bool {
        self.off_diagonal().is_none()
    }

    pub fn to_wire(&self) -> TableWire {
        let r = self.block;
        let mut entries = Vec::new();
        for a in 0..self.basis.len() {
            for b in 0..self.basis.len() {
                for i in 0..r {
                    for j in 0..r {
                        let v = &self.matrix[(a * r + i, b * r + j)];
                        if v.is_zero() {
                            continue;
                        }
                        entries.push(EntryWire {
                            alpha: self.basis.get(a).clone(),
                            beta: self.basis.get(b).clone(),
                            i: (r > 1).then_some(i),
                            j: (r > 1).then_some(j),
                            re: Exact(v.re.clone()),
                            im: Exact(v.im.clone()),
                        });
                    }
                }
            }
        }
        TableWire {
            kind: (self.kind == TableKind::Moment).then_some(TableKind::Moment),
            d: self.dim(),
            n: self.degree(),
            block: r,
            entries,
        }
    }

    pub fn from_wire(w: &TableWire) -> Result<Self> {
        if w.d == 0 || w.block == 0 {
            return Err(Error::invalid("d and block must be positive"));
        }
        let basis = Basis::new(w.d, w.n);
        let r = w.block;
        let n = basis.len() * r;
        let mut matrix = CMatrix::zeros(n, n);
        let mut seen = std::collections::HashSet::new();
        for e in &w.entries {
            let locate = |m: &MultiIndex| -> Result<usize> {
                if m.dim() != w.d {
                    return Err(Error::DimensionMismatch {
                        expected: w.d,
                        found: m.dim(),
                    });
                }
                basis
                    .position(m)
                    .ok_or_else(|| Error::invalid(format!("index {m} exceeds the degree bound {}", w.n)))
            };
            let (i, j) = (e.i.unwrap_or(0), e.j.unwrap_or(0));
            if i >= r || j >= r {
                return Err(Error::invalid("block index out of range"));
            }
            let row = locate(&e.alpha)? * r + i;
            let col = locate(&e.beta)? * r + j;
            if !seen.insert((row, col)) {
                return Err(Error::invalid(format!("duplicate entry ({}, {})", e.alpha, e.beta)));
            }
            matrix[(row, col)] = cr(e.re.0.clone(), e.im.0.clone());
        }
        if !matrix.is_hermitian() {
            return Err(Error::invalid("table is not Hermitian"));
        }
        Ok(GramTable {
            basis,
            block: r,
            kind: w.kind.unwrap_or(TableKind::Gram),
            matrix,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_wire(&serde_json::from_str(s)?)
    }
}

/// Swap `i` and `j` inside every `r×r` block.
pub fn block_transpose(m: &CMatrix, r: usize) -> CMatrix {
    if r == 1 {
        return m.clone();
    }
    CMatrix::from_fn(m.rows(), m.cols(), |x, y| {
        let (a, i) = (x / r, x % r);
        let (b, j) = (y / r, y % r);
        m[(a * r + j, b * r + i)].clone()
    })
}

/// Wire form: `{"d": 2, "N": 3, "entries": [{"alpha": [..], "beta": [..], "re": "p/q", "im": "p/q"}]}`.
/// Block tables add `"block": r` and per-entry `"i"`, `"j"`; moment tables
/// add `"kind": "moment"`. Omitted entries are zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<TableKind>,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub block: usize,
    pub entries: Vec<EntryWire>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntryWire {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub re: Exact,
    #[serde(default = "zero_exact")]
    pub im: Exact,
}

fn one() -> usize {
    1
}

fn is_one(x: &usize) -> bool {
    *x == 1
}

fn zero_exact() -> Exact {
    Exact(crate::scalar::Rational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cre, rat, rint};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let t = GramTable::from_scalar_fn(2, 2, TableKind::Gram, |a, b| {
            if a == b {
                cre(rint(1 + a.order() as i64))
            } else if a.order() + b.order() == 1 {
                cr(rat(1, 7), if a.is_zero() { rat(1, 3) } else { rat(-1, 3) })
            } else {
                cre(rint(0))
            }
        });
        let back = GramTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert!(!t.is_diagonal());
        assert_eq!(t.scalar(&mi(&[0, 0]), &mi(&[1, 0])).unwrap(), &cr(rat(1, 7), rat(1, 3)));
    }

    #[test]
    fn rejects_non_hermitian() {
        let s = r#"{"d":1,"N":1,"entries":[{"alpha":[0],"beta":[1],"re":"1/2","im":"0/1"}]}"#;
        assert!(GramTable::from_json(s).is_err());
        let s = r#"{"d":1,"N":1,"entries":[{"alpha":[0],"beta":[2],"re":"1/2"}]}"#;
        assert!(GramTable::from_json(s).is_err());
    }

    #[test]
    fn block_transpose_is_involution() {
        let m = CMatrix::from_fn(4, 4, |i, j| cr(rint(i as i64), rint(j as i64)));
        assert_eq!(block_transpose(&block_transpose(&m, 2), 2), m);
        assert_eq!(block_transpose(&m, 2)[(0, 1)], m[(1, 0)]);
        assert_eq!(block_transpose(&m, 2)[(0, 3)], m[(1, 2)]);
    }

    #[test]
    fn moment_kind_survives_wire() {
        let t = GramTable::from_scalar_fn(1, 1, TableKind::Moment, |a, b| {
            if a == b { cre(rint(1)) } else { cre(rint(0)) }
        });
        let w = t.to_json();
        assert!(w.contains("\"kind\":\"moment\""));
        assert_eq!(GramTable::from_json(&w).unwrap().kind(), TableKind::Moment);
    }
}
