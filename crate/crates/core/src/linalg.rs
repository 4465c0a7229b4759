//! Small dense exact linear algebra over the complex rationals, plus a float
//! eigenvalue path for reporting.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{c_to_f64, czero, ComplexRational, Rational};

/// Row-major dense matrix of complex rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexRational>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = crate::scalar::cone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ComplexRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[ComplexRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i..self.cols).all(|j| self[(i, j)] == self[(j, i)].conj()))
    }

    /// Leading principal `n × n` block.
    pub fn leading(&self, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| self[(i, j)].clone())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> CMatrix {
        CMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[ComplexRational]) -> Vec<ComplexRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(czero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &ComplexRational) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_real(&self, s: &Rational) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.scale(s.clone())).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &CMatrix, s: &Rational) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b.scale(s.clone());
            }
        }
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(&ComplexRational, &ComplexRational) -> ComplexRational) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Largest entry modulus, as a float.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|z| c_to_f64(z).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| c_to_f64(&self[(i, j)]))
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = ComplexRational;
    fn index(&self, (i, j): (usize, usize)) -> &ComplexRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Outcome of the exact semidefiniteness test.
#[derive(Clone, Debug, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    /// Rank, meaningful only when `psd` holds.
    pub rank: usize,
    /// Indices of the positive pivots, in elimination order. They select a
    /// principal submatrix that is positive definite and spans the range.
    pub pivots: Vec<usize>,
}

/// Exact positive-semidefiniteness of a Hermitian matrix by symmetric pivoted
/// LDL* elimination with tolerance zero.
pub fn psd_exact(a: &CMatrix) -> Result<PsdCheck> {
    if !a.is_hermitian() {
        return Err(Error::invalid("PSD test requires a Hermitian matrix"));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    loop {
        if active.is_empty() {
            break;
        }
        let mut pivot = None;
        for &i in &active {
            let d = &m[(i, i)].re;
            if d.is_negative() {
                return Ok(PsdCheck { psd: false, rank: 0, pivots });
            }
            if pivot.is_none() && d.is_positive() {
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else {
            // Zero diagonal: a PSD remainder must vanish identically.
            let zero = active
                .iter()
                .all(|&i| active.iter().all(|&j| m[(i, j)].is_zero()));
            return Ok(PsdCheck { psd: zero, rank: pivots.len(), pivots });
        };
        active.retain(|&i| i != p);
        let piv = m[(p, p)].re.clone();
        for &i in &active {
            let f = &m[(i, p)] / &piv;
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let t = &f * &m[(p, j)];
                if !t.is_zero() {
                    m[(i, j)] -= t;
                }
            }
        }
        pivots.push(p);
    }
    Ok(PsdCheck {
        psd: true,
        rank: pivots.len(),
        pivots,
    })
}

pub fn nsd_exact(a: &CMatrix) -> Result<PsdCheck> {
    psd_exact(&a.scale_real(&Rational::from_integer((-1).into())))
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut CMatrix) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(r, j)].clone();
                m[(r, j)] = tmp;
            }
        }
        let inv = crate::scalar::cone() / m[(r, c)].clone();
        for j in c..cols {
            let v = &m[(r, j)] * &inv;
            m[(r, j)] = v;
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..cols {
                let t = &f * &m[(r, j)];
                if !t.is_zero() {
                    m[(i, j)] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &CMatrix) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// A basis of `{x : A x = 0}`.
pub fn nullspace(a: &CMatrix) -> Vec<Vec<ComplexRational>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let cols = a.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![czero(); cols];
            v[f] = crate::scalar::cone();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(r, f)].clone();
            }
            v
        })
        .collect()
}

/// Solve `A X = B` for square invertible `A`.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n {
        return Err(Error::invalid("solve: shape mismatch"));
    }
    let mut aug = CMatrix::from_fn(n, n + b.cols(), |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[(i, j - n)].clone()
        }
    });
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::Domain("singular system".into()));
    }
    Ok(CMatrix::from_fn(n, b.cols(), |i, j| aug[(i, n + j)].clone()))
}

/// Float eigenvalue summary of a Hermitian matrix.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct EigenSummary {
    pub min: f64,
    pub max: f64,
}

pub fn hermitian_eigen_range(m: &DMatrix<Complex64>) -> EigenSummary {
    if m.nrows() == 0 {
        return EigenSummary { min: 0.0, max: 0.0 };
    }
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    EigenSummary { min, max }
}

/// Float-path semidefiniteness: eigenvalues above `-tol·‖A‖`.
pub fn psd_float(m: &DMatrix<Complex64>, tol: f64) -> (bool, EigenSummary) {
    let e = hermitian_eigen_range(m);
    let scale = e.min.abs().max(e.max.abs()).max(1.0);
    (e.min >= -tol * scale, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cr, cre, rat, rint};

    fn real(rows: usize, cols: usize, v: &[i64]) -> CMatrix {
        CMatrix::from_fn(rows, cols, |i, j| cre(rint(v[i * cols + j])))
    }

    #[test]
    fn psd_examples() {
        assert!(psd_exact(&real(2, 2, &[2, 1, 1, 2])).unwrap().psd);
        assert!(!psd_exact(&real(2, 2, &[1, 2, 2, 1])).unwrap().psd);
        let singular = psd_exact(&real(2, 2, &[1, 1, 1, 1])).unwrap();
        assert!(singular.psd);
        assert_eq!(singular.rank, 1);
        // zero diagonal with a nonzero off-diagonal is indefinite
        assert!(!psd_exact(&real(2, 2, &[0, 1, 1, 0])).unwrap().psd);
        assert!(psd_exact(&CMatrix::zeros(3, 3)).unwrap().psd);
        assert!(psd_exact(&real(2, 2, &[1, 2, 3, 4])).is_err());
    }

    #[test]
    fn complex_hermitian_psd() {
        // [[1, i/2], [-i/2, 1]] has eigenvalues 1/2 and 3/2
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = cr(rint(0), rat(1, 2));
        m[(1, 0)] = cr(rint(0), rat(-1, 2));
        assert!(psd_exact(&m).unwrap().psd);
        let e = hermitian_eigen_range(&m.to_f64());
        assert!((e.min - 0.5).abs() < 1e-12 && (e.max - 1.5).abs() < 1e-12);
    }

    #[test]
    fn nullspace_and_solve() {
        let a = real(2, 3, &[1, 2, 3, 2, 4, 6]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert_eq!(rank(&a), 1);
        let m = real(2, 2, &[2, 1, 1, 3]);
        let b = real(2, 1, &[3, 5]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul(&x), b);
        assert!(solve(&real(2, 2, &[1, 1, 1, 1]), &b).is_err());
    }
}
