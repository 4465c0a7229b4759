//! Truncated commuting tuples on graded monomial bases and the bilinear-form
//! calculus of `Q_T^n(I)` and `B_m(T)`.
//!
//! Every form is computed from the Gram table and the forward action of the
//! tuple only; a form obtained after `n` applications of the tuple is valid
//! on the window of degree `≤ N − n`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{nsd_exact, nullspace, psd_exact, CMatrix};
use crate::multiindex::{binomial, enumerate_grade, Basis, MultiIndex};
use crate::scalar::{cone, cr, czero, rational_sqrt, ComplexRational, Exact, Rational};
use crate::spaces::{gram, SpaceSpec};
use crate::table::{GramTable, TableKind, TableWire};

/// A sparse linear map stored by columns: column `c` lists `(row, coeff)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    cols: Vec<Vec<(usize, ComplexRational)>>,
}

impl SparseOp {
    pub fn new(cols: Vec<Vec<(usize, ComplexRational)>>) -> Self {
        SparseOp { cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: usize) -> &[(usize, ComplexRational)] {
        &self.cols[c]
    }

    /// `A v` for `v` supported on the first `ncols` coordinates; `out_len`
    /// is the length of the result.
    pub fn apply(&self, v: &[ComplexRational], out_len: usize) -> Result<Vec<ComplexRational>> {
        let mut out = vec![czero(); out_len];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let col = self
                .cols
                .get(c)
                .ok_or_else(|| Error::Window("vector leaves the domain of the truncated operator".into()))?;
            for (r, a) in col {
                out[*r] += a * x;
            }
        }
        Ok(out)
    }
}

/// A commuting `d`-tuple acting from `V_{N−1} ⊗ C^r` into `V_N ⊗ C^r`, with
/// the Gram table of the ambient space on `V_N ⊗ C^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedTuple {
    ops: Vec<SparseOp>,
    gram: GramTable,
}

/// A Hermitian form on `V_W ⊗ C^r`, valid on the window `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowedForm {
    pub window: u32,
    pub block: usize,
    pub matrix: CMatrix,
}

impl WindowedForm {
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// The form restricted to a smaller window.
    pub fn restrict(&self, d: usize, w: u32) -> WindowedForm {
        assert!(w <= self.window, "window can only shrink");
        let n = Basis::new(d, w).len() * self.block;
        WindowedForm {
            window: w,
            block: self.block,
            matrix: self.matrix.leading(n),
        }
    }

    pub fn sub(&self, other: &WindowedForm) -> WindowedForm {
        assert_eq!(self.window, other.window);
        WindowedForm {
            window: self.window,
            block: self.block,
            matrix: self.matrix.sub(&other.matrix),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `B_m(T) = 0` on the window.
    Isometry,
    /// `(−1)^m B_m(T) ≤ 0` and nonzero.
    Concave,
    /// `(−1)^m B_m(T) ≥ 0` and nonzero.
    Convex,
    Neither,
    /// The window is empty.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub m: u32,
    /// Degree bound of the window the verdict refers to; absent when empty.
    pub window: Option<u32>,
    pub verdict: Verdict,
}

impl TruncatedTuple {
    pub fn new(gram: GramTable, ops: Vec<SparseOp>) -> Result<Self> {
        if gram.kind() != TableKind::Gram {
            return Err(Error::invalid("tuple needs a Gram table"));
        }
        let d = gram.dim();
        if ops.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: ops.len(),
            });
        }
        if gram.degree() == 0 {
            return Err(Error::Window("degree bound must be at least 1".into()));
        }
        let t = TruncatedTuple { ops, gram };
        let r = t.block();
        let dom = t.prefix(t.degree() - 1);
        let total = t.prefix(t.degree());
        for op in &t.ops {
            if op.ncols() != dom {
                return Err(Error::DimensionMismatch {
                    expected: dom,
                    found: op.ncols(),
                });
            }
            for c in 0..dom {
                let deg = t.basis().get(c / r).order();
                for (row, _) in op.column(c) {
                    if *row >= total || t.basis().get(row / r).order() > deg + 1 {
                        return Err(Error::invalid("operators may raise the degree by at most one"));
                    }
                }
            }
        }
        if !t.gram.is_hermitian() {
            return Err(Error::invalid("Gram table is not Hermitian"));
        }
        if !t.gram.check_psd()?.psd {
            return Err(Error::NotPsd("Gram table of the tuple".into()));
        }
        t.check_commutation()?;
        Ok(t)
    }

    /// `M_z` on the span of `{z^α e_s}`: `z^α e_s ↦ z^{α+ε_j} e_s`.
    pub fn multiplication(gram: GramTable) -> Result<Self> {
        let ops = shift_ops(gram.basis(), gram.block());
        Self::new(gram, ops)
    }

    /// `M_z` on a model space, truncated at degree `degree`.
    pub fn from_space(spec: &SpaceSpec, degree: u32) -> Result<Self> {
        Self::multiplication(gram(spec, degree)?)
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn degree(&self) -> u32 {
        self.gram.degree()
    }

    pub fn block(&self) -> usize {
        self.gram.block()
    }

    pub fn basis(&self) -> &Basis {
        self.gram.basis()
    }

    pub fn gram(&self) -> &GramTable {
        &self.gram
    }

    pub fn ops(&self) -> &[SparseOp] {
        &self.ops
    }

    /// Number of coordinates of `V_w ⊗ C^r`.
    pub fn prefix(&self, w: u32) -> usize {
        self.basis().prefix_len(w) * self.block()
    }

    /// Degree of the coordinate `i`.
    pub fn coordinate_degree(&self, i: usize) -> u32 {
        self.basis().get(i / self.block()).order()
    }

    /// `T_i T_j = T_j T_i` on `V_{N−2} ⊗ C^r`.
    pub fn check_commutation(&self) -> Result<()> {
        if self.degree() < 2 {
            return Ok(());
        }
        let dom = self.prefix(self.degree() - 2);
        let mid = self.prefix(self.degree() - 1);
        let total = self.prefix(self.degree());
        for c in 0..dom {
            let mut e = vec![czero(); mid];
            e[c] = cone();
            let images: Vec<Vec<ComplexRational>> = self
                .ops
                .iter()
                .map(|op| op.apply(&e, mid).map(|v| v[..mid].to_vec()))
                .collect::<Result<_>>()?;
            for i in 0..self.ops.len() {
                for j in i + 1..self.ops.len() {
                    let a = self.ops[i].apply(&images[j], total)?;
                    let b = self.ops[j].apply(&images[i], total)?;
                    if a != b {
                        return Err(Error::invalid(format!("T_{} and T_{} do not commute", i + 1, j + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `⟨u, v⟩` for coordinate vectors in `V_N ⊗ C^r`.
    pub fn inner(&self, u: &[ComplexRational], v: &[ComplexRational]) -> ComplexRational {
        let g = self.gram.matrix();
        let mut acc = czero();
        for (a, x) in u.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in v.iter().enumerate() {
                if y.is_zero() || g[(a, b)].is_zero() {
                    continue;
                }
                acc += x * &g[(a, b)] * y.conj();
            }
        }
        acc
    }

    /// `T^γ v`, padded to `V_N ⊗ C^r`.
    pub fn apply_power(&self, gamma: &MultiIndex, v: &[ComplexRational]) -> Result<Vec<ComplexRational>> {
        let total = self.prefix(self.degree());
        let mut cur = v.to_vec();
        cur.resize(total, czero());
        for j in 0..self.dim() {
            for _ in 0..gamma[j] {
                let last = cur.iter().rposition(|x| !x.is_zero()).map_or(0, |i| i + 1);
                cur = self.ops[j].apply(&cur[..last], total)?;
            }
        }
        Ok(cur)
    }

    /// `F ↦ Σ_j F(T_j ·, T_j ·)`: a form on window `W` gives one on `W − 1`.
    pub fn q_shift(&self, form: &WindowedForm) -> Result<WindowedForm> {
        if form.window == 0 {
            return Err(Error::Window("Q_T needs a window of degree at least 1".into()));
        }
        let w = form.window - 1;
        let n = self.prefix(w);
        let m = &form.matrix;
        let mut out = CMatrix::zeros(n, n);
        for op in &self.ops {
            for a in 0..n {
                let ca = op.column(a);
                for b in 0..n {
                    let cb = op.column(b);
                    let mut acc = czero();
                    for (k, x) in ca {
                        for (l, y) in cb {
                            let v = &m[(*k, *l)];
                            if !v.is_zero() {
                                acc += x * v * y.conj();
                            }
                        }
                    }
                    if !acc.is_zero() {
                        out[(a, b)] += acc;
                    }
                }
            }
        }
        Ok(WindowedForm {
            window: w,
            block: form.block,
            matrix: out,
        })
    }

    /// The Gram table as a form on the full window.
    pub fn identity_form(&self) -> WindowedForm {
        WindowedForm {
            window: self.degree(),
            block: self.block(),
            matrix: self.gram.matrix().clone(),
        }
    }

    /// `Q_T^n(I)` for `n = 0..=upto`, by repeated `q_shift`.
    pub fn qt_forms(&self, upto: u32) -> Result<Vec<WindowedForm>> {
        if upto > self.degree() {
            return Err(Error::Window(format!("n = {upto} exceeds the degree bound {}", self.degree())));
        }
        let mut forms = vec![self.identity_form()];
        for _ in 0..upto {
            let next = self.q_shift(forms.last().expect("nonempty"))?;
            forms.push(next);
        }
        Ok(forms)
    }

    /// `⟨Q_T^n(I)u, v⟩ = Σ_{|γ|=n} |γ|!/γ! ⟨T^γ u, T^γ v⟩` on window `N − n`.
    pub fn qt_form(&self, n: u32) -> Result<WindowedForm> {
        Ok(self.qt_forms(n)?.pop().expect("nonempty"))
    }

    /// `Q_T^n(I)` assembled term by term over `|γ| = n`.
    pub fn qt_form_multinomial(&self, n: u32) -> Result<WindowedForm> {
        if n > self.degree() {
            return Err(Error::Window(format!("n = {n} exceeds the degree bound {}", self.degree())));
        }
        let w = self.degree() - n;
        let size = self.prefix(w);
        let mut out = CMatrix::zeros(size, size);
        for gamma in enumerate_grade(self.dim(), n) {
            let weight = Rational::from_integer(gamma.multinomial_weight());
            let images: Vec<Vec<ComplexRational>> = (0..size)
                .map(|c| {
                    let mut e = vec![czero(); size];
                    e[c] = cone();
                    self.apply_power(&gamma, &e)
                })
                .collect::<Result<_>>()?;
            for a in 0..size {
                for b in 0..size {
                    let v = self.inner(&images[a], &images[b]);
                    if !v.is_zero() {
                        out[(a, b)] += v.scale(weight.clone());
                    }
                }
            }
        }
        Ok(WindowedForm {
            window: w,
            block: self.block(),
            matrix: out,
        })
    }

    /// `B_m(T) = Σ_n (−1)^n C(m, n) Q_T^n(I)` on window `N − m`.
    pub fn bm_form(&self, m: u32) -> Result<WindowedForm> {
        let forms = self.qt_forms(m)?;
        Ok(alternating_sum(&forms, m, self.dim()))
    }

    /// `B_0, …, B_m`, each on its own window.
    pub fn bm_forms(&self, m: u32) -> Result<Vec<WindowedForm>> {
        let forms = self.qt_forms(m)?;
        Ok((0..=m).map(|k| alternating_sum(&forms[..=k as usize], k, self.dim())).collect())
    }

    pub fn classify(&self, m: u32) -> Result<Classification> {
        if m > self.degree() {
            return Ok(Classification {
                m,
                window: None,
                verdict: Verdict::Inconclusive,
            });
        }
        let b = self.bm_form(m)?;
        Ok(Classification {
            m,
            window: Some(b.window),
            verdict: verdict_of(&b, m)?,
        })
    }

    /// Verdicts for `m = 1..=m_max`, sharing one pass of `Q_T`.
    pub fn classify_all(&self, m_max: u32) -> Result<Vec<Classification>> {
        let top = m_max.min(self.degree());
        let forms = if top > 0 { self.bm_forms(top)? } else { vec![] };
        (1..=m_max)
            .map(|m| {
                if m > top {
                    return Ok(Classification {
                        m,
                        window: None,
                        verdict: Verdict::Inconclusive,
                    });
                }
                let b = &forms[m as usize];
                Ok(Classification {
                    m,
                    window: Some(b.window),
                    verdict: verdict_of(b, m)?,
                })
            })
            .collect()
    }

    /// Vectors `v ∈ V_{N−1} ⊗ C^r` with `⟨v, T_j u⟩ = 0` for all `j` and all
    /// `u ∈ V_{N−1} ⊗ C^r`, modulo null vectors of the Gram table.
    pub fn joint_kernel(&self) -> Result<JointKernel> {
        let n = self.prefix(self.degree() - 1);
        let g = self.gram.matrix();
        // X[(j, c), a] = Σ_b G[a, b] conj(T_j[b, c])
        let mut rows = Vec::new();
        for op in &self.ops {
            for c in 0..n {
                let row: Vec<ComplexRational> = (0..n)
                    .map(|a| {
                        op.column(c)
                            .iter()
                            .fold(czero(), |acc, (b, t)| acc + &g[(a, *b)] * t.conj())
                    })
                    .collect();
                rows.push(row);
            }
        }
        let x = CMatrix::from_fn(rows.len(), n, |i, j| rows[i][j].clone());
        let candidates = nullspace(&x);
        let k = candidates.len();
        let h = CMatrix::from_fn(k, k, |p, q| self.inner(&candidates[p], &candidates[q]));
        let check = psd_exact(&h)?;
        let mut pivots = check.pivots.clone();
        pivots.sort_unstable();
        let vectors: Vec<Vec<ComplexRational>> = pivots.iter().map(|&p| candidates[p].clone()).collect();
        let gram = CMatrix::from_fn(vectors.len(), vectors.len(), |p, q| self.inner(&vectors[p], &vectors[q]));
        Ok(JointKernel {
            vectors,
            gram,
            null_directions: k - pivots.len(),
        })
    }

    pub fn to_wire(&self) -> TupleWire {
        let r = self.block();
        let ops = self
            .ops
            .iter()
            .map(|op| {
                let mut out = Vec::new();
                for c in 0..op.ncols() {
                    for (row, v) in op.column(c) {
                        out.push(Triplet {
                            from: self.basis().get(c / r).clone(),
                            to: self.basis().get(row / r).clone(),
                            i: (r > 1).then_some(c % r),
                            j: (r > 1).then_some(row % r),
                            re: Exact(v.re.clone()),
                            im: Exact(v.im.clone()),
                        });
                    }
                }
                out
            })
            .collect();
        TupleWire {
            gram: self.gram.to_wire(),
            ops,
        }
    }

    pub fn from_wire(w: &TupleWire) -> Result<Self> {
        let gram = GramTable::from_wire(&w.gram)?;
        if gram.degree() == 0 {
            return Err(Error::Window("degree bound must be at least 1".into()));
        }
        let r = gram.block();
        let basis = gram.basis().clone();
        let dom = basis.prefix_len(gram.degree() - 1) * r;
        let ops = w
            .ops
            .iter()
            .map(|trips| {
                let mut cols = vec![Vec::new(); dom];
                for t in trips {
                    let (i, j) = (t.i.unwrap_or(0), t.j.unwrap_or(0));
                    if i >= r || j >= r {
                        return Err(Error::invalid("block index out of range"));
                    }
                    let c = basis
                        .position(&t.from)
                        .map(|p| p * r + i)
                        .filter(|&c| c < dom)
                        .ok_or_else(|| Error::invalid(format!("source {} outside the domain", t.from)))?;
                    let row = basis
                        .position(&t.to)
                        .map(|p| p * r + j)
                        .ok_or_else(|| Error::invalid(format!("target {} outside the space", t.to)))?;
                    cols[c].push((row, cr(t.re.0.clone(), t.im.0.clone())));
                }
                Ok(SparseOp::new(cols))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(gram, ops)
    }
}

/// Output of [`TruncatedTuple::joint_kernel`].
#[derive(Clone, Debug, PartialEq)]
pub struct JointKernel {
    /// Coordinates in `V_{N−1} ⊗ C^r`, linearly independent modulo null vectors.
    pub vectors: Vec<Vec<ComplexRational>>,
    /// Their Gram matrix (positive definite).
    pub gram: CMatrix,
    /// Kernel directions discarded because they have zero norm.
    pub null_directions: usize,
}

impl JointKernel {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

fn shift_ops(basis: &Basis, r: usize) -> Vec<SparseOp> {
    let d = basis.dim();
    let dom = basis.prefix_len(basis.degree() - 1) * r;
    (0..d)
        .map(|j| {
            let cols = (0..dom)
                .map(|c| {
                    let up = basis.get(c / r).bump(j);
                    let row = basis.position(&up).expect("degree within bound") * r + c % r;
                    vec![(row, cone())]
                })
                .collect();
            SparseOp::new(cols)
        })
        .collect()
}

fn alternating_sum(qforms: &[WindowedForm], m: u32, d: usize) -> WindowedForm {
    let w = qforms[m as usize].window;
    let block = qforms[0].block;
    let mut acc = qforms[m as usize].restrict(d, w).matrix.scale_real(&Rational::zero());
    for n in 0..=m {
        let c = Rational::from_integer(binomial(m, n) * if n % 2 == 0 { BigInt::one() } else { -BigInt::one() });
        acc.add_assign_scaled(&qforms[n as usize].restrict(d, w).matrix, &c);
    }
    WindowedForm {
        window: w,
        block,
        matrix: acc,
    }
}

fn verdict_of(b: &WindowedForm, m: u32) -> Result<Verdict> {
    if b.is_zero() {
        return Ok(Verdict::Isometry);
    }
    let signed = if m % 2 == 0 {
        b.matrix.clone()
    } else {
        b.matrix.scale_real(&-Rational::one())
    };
    if nsd_exact(&signed)?.psd {
        Ok(Verdict::Concave)
    } else if psd_exact(&signed)?.psd {
        Ok(Verdict::Convex)
    } else {
        Ok(Verdict::Neither)
    }
}

/// The `d`-tuple `(T0/√d, …, T0/√d)` realized on product monomials: `z^α`
/// stands for `T^α e_0 = d^{−|α|/2} T0^{|α|} e_0`, and every `T_j` is the
/// pure shift `z^α ↦ z^{α+ε_j}`.
pub fn scaled_pair(t0: &TruncatedTuple, d: usize) -> Result<TruncatedTuple> {
    if t0.dim() != 1 || t0.block() != 1 {
        return Err(Error::invalid("scaled_pair needs a scalar one-variable tuple"));
    }
    if d == 0 {
        return Err(Error::invalid("d must be positive"));
    }
    let n = t0.degree();
    let total = t0.prefix(n);
    let mut cyclic = Vec::with_capacity(n as usize + 1);
    let mut v = vec![czero(); total];
    v[0] = cone();
    cyclic.push(v.clone());
    for _ in 0..n {
        let last = v.iter().rposition(|x| !x.is_zero()).map_or(0, |i| i + 1);
        v = t0.ops[0].apply(&v[..last], total)?;
        cyclic.push(v.clone());
    }
    let h: Vec<Vec<ComplexRational>> = cyclic
        .iter()
        .map(|a| cyclic.iter().map(|b| t0.inner(a, b)).collect())
        .collect();
    let dr = Rational::from_integer(BigInt::from(d));
    let root = rational_sqrt(&dr);
    let mut bad = false;
    let table = GramTable::from_scalar_fn(d, n, TableKind::Gram, |a, b| {
        let (p, q) = (a.order() as usize, b.order() as usize);
        let v = &h[p][q];
        if v.is_zero() {
            return czero();
        }
        let e = p + q;
        let scale = if e % 2 == 0 {
            num_traits::pow(dr.clone(), e / 2)
        } else if let Some(s) = &root {
            num_traits::pow(s.clone(), e)
        } else {
            bad = true;
            Rational::one()
        };
        v / cr(scale, Rational::zero())
    });
    if bad {
        return Err(Error::Domain(
            "d^{-1/2} is irrational and the cyclic Gram matrix pairs degrees of different parity".into(),
        ));
    }
    TruncatedTuple::multiplication(table)
}

/// Wire form of a tuple: the Gram table plus `d` lists of sparse triplets
/// `{"from": α, "to": β, "re": "p/q", "im": "p/q"}` meaning
/// `T_j z^α ∋ (re + i·im) z^β`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TupleWire {
    pub gram: TableWire,
    pub ops: Vec<Vec<Triplet>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Triplet {
    pub from: MultiIndex,
    pub to: MultiIndex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub re: Exact,
    #[serde(default = "zero_exact")]
    pub im: Exact,
}

fn zero_exact() -> Exact {
    Exact(Rational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Measure;
    use crate::scalar::{cre, rat, rint};
    use crate::spaces::one_d_dirichlet;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn dirichlet_disc(n: u32) -> TruncatedTuple {
        TruncatedTuple::multiplication(one_d_dirichlet(&Measure::surface(1).unwrap(), n).unwrap()).unwrap()
    }

    #[test]
    fn q_zero_is_gram() {
        let t = TruncatedTuple::from_space(&SpaceSpec::hardy(2).unwrap(), 3).unwrap();
        assert_eq!(t.qt_form(0).unwrap().matrix, *t.gram().matrix());
        assert_eq!(t.bm_form(0).unwrap().matrix, *t.gram().matrix());
        assert!(t.qt_form(4).is_err());
    }

    #[test]
    fn szego_shift_is_spherical_isometry() {
        for d in 1..=3 {
            let t = TruncatedTuple::from_space(&SpaceSpec::hardy(d).unwrap(), 4).unwrap();
            let q = t.qt_form(1).unwrap();
            assert_eq!(q, t.identity_form().restrict(d, 3));
            assert_eq!(t.classify(1).unwrap().verdict, Verdict::Isometry);
        }
    }

    #[test]
    fn disc_dirichlet_q_form() {
        let t = dirichlet_disc(5);
        let q = t.qt_form(1).unwrap();
        for k in 0..=4u32 {
            let i = t.basis().position(&mi(&[k])).unwrap();
            assert_eq!(q.matrix[(i, i)], cre(rint(2 + k as i64)));
        }
        assert_eq!(t.classify(2).unwrap().verdict, Verdict::Isometry);
        assert_eq!(t.classify(1).unwrap().verdict, Verdict::Convex);
    }

    #[test]
    fn recursive_and_multinomial_routes_agree() {
        let t = TruncatedTuple::from_space(&SpaceSpec::b_lambda(rint(2), vec![cr(rat(1, 3), rat(1, 4)), cre(rat(-1, 5))]).unwrap(), 4)
            .unwrap();
        for n in 0..=3 {
            assert_eq!(t.qt_form(n).unwrap(), t.qt_form_multinomial(n).unwrap());
        }
    }

    #[test]
    fn drury_arveson_d2() {
        let t = TruncatedTuple::from_space(&SpaceSpec::drury_arveson(2).unwrap(), 5).unwrap();
        assert!(t.bm_form(2).unwrap().is_zero());
        assert!(!t.bm_form(1).unwrap().is_zero());
        let v = t.classify_all(3).unwrap();
        assert_eq!(v[0].verdict, Verdict::Convex);
        assert_eq!(v[1].verdict, Verdict::Isometry);
        assert_eq!(v[2].verdict, Verdict::Isometry);
        assert_eq!(t.classify(6).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn telescoping_and_generating_identities() {
        let t = TruncatedTuple::from_space(&SpaceSpec::lambda_c(rint(3), vec![rint(1), rint(-1)]).unwrap(), 6).unwrap();
        let b = t.bm_forms(3).unwrap();
        for m in 1..=3usize {
            let prev = &b[m - 1];
            let shifted = t.q_shift(prev).unwrap();
            assert_eq!(b[m], prev.restrict(2, shifted.window).sub(&shifted));
        }
        // Q^k = Σ_{j<2} C(k,j)(−1)^j B_j for a 2-isometry
        for k in 0..=4u32 {
            let q = t.qt_form(k).unwrap();
            let w = q.window;
            let mut rhs = b[0].restrict(2, w).matrix.clone();
            if k >= 1 {
                rhs.add_assign_scaled(&b[1].restrict(2, w).matrix, &-Rational::from_integer(k.into()));
            }
            assert_eq!(q.matrix, rhs);
        }
    }

    #[test]
    fn joint_kernels() {
        let t = TruncatedTuple::from_space(&SpaceSpec::lambda_c(rint(3), vec![rint(1), rint(-1)]).unwrap(), 4).unwrap();
        let k = t.joint_kernel().unwrap();
        assert_eq!(k.dim(), 1);
        assert!(k.vectors[0][1..].iter().all(Zero::is_zero));
        let t = TruncatedTuple::from_space(&SpaceSpec::b_lambda(rint(1), vec![cre(rat(1, 4)), cre(rat(1, 8))]).unwrap(), 4).unwrap();
        let k = t.joint_kernel().unwrap();
        assert_eq!(k.dim(), 1);
        assert!(k.vectors[0][1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn scaled_pair_fixture() {
        let t0 = dirichlet_disc(6);
        let pair = scaled_pair(&t0, 2).unwrap();
        assert_eq!(pair.classify(2).unwrap().verdict, Verdict::Isometry);
        assert!(!pair.gram().is_diagonal());
        assert_eq!(pair.gram().scalar(&mi(&[1, 0]), &mi(&[0, 1])).unwrap(), &cre(rat(1, 1)));
        let k = pair.joint_kernel().unwrap();
        assert_eq!(k.dim(), 1);
        // d = 1 reproduces T0
        assert_eq!(scaled_pair(&t0, 1).unwrap(), t0);
        // Hardy disc shift, d = 3: spherical isometry
        let hardy = TruncatedTuple::from_space(&SpaceSpec::hardy(1).unwrap(), 4).unwrap();
        let triple = scaled_pair(&hardy, 3).unwrap();
        assert_eq!(triple.classify(1).unwrap().verdict, Verdict::Isometry);
    }

    #[test]
    fn rejects_non_commuting_ops() {
        let g = gram(&SpaceSpec::hardy(2).unwrap(), 2).unwrap();
        let mut ops = shift_ops(g.basis(), 1);
        ops[0].cols[0].push((2, cre(rint(1))));
        assert!(TruncatedTuple::new(g, ops).is_err());
    }

    #[test]
    fn wire_round_trip() {
        let t = TruncatedTuple::from_space(&SpaceSpec::b_lambda(rint(1), vec![cre(rat(1, 4)), czero()]).unwrap(), 3).unwrap();
        let s = serde_json::to_string(&t.to_wire()).unwrap();
        let back = TruncatedTuple::from_wire(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
