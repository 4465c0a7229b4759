//! Gramian arrays of commuting tuples over a wandering frame, matrix backward
//! shifts `σ^γ`, defect arrays `Δ_n`, and the equivalent m-isometry criteria.
//!
//! Arrays use the Gram layout: block `(α, β)` has entries
//! `⟨T^α f_i, T^β f_j⟩`, so the flattened array is a Gram matrix. This is the
//! transpose of the `[⟨T^β f_j, T^α f_i⟩]_{i,j}` layout; every condition
//! below is invariant under that transposition.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{psd_exact, rank, CMatrix};
use crate::multiindex::{binomial, enumerate_grade, MultiIndex};
use crate::scalar::{czero, rational_sqrt, ComplexRational, Rational};
use crate::table::{GramTable, TableKind};
use crate::tuples::TruncatedTuple;

/// `σ^γ A = [A_{α+γ, β+γ}]` on degree bound `N − |γ|`.
pub fn backward_shift(a: &GramTable, gamma: &MultiIndex) -> Result<GramTable> {
    if gamma.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: gamma.dim(),
        });
    }
    let k = gamma.order();
    if k > a.degree() {
        return Err(Error::Window(format!("|γ| = {k} exceeds the degree bound {}", a.degree())));
    }
    let r = a.block();
    let w = a.degree() - k;
    let shifted = crate::multiindex::Basis::new(a.dim(), w);
    let src: Vec<usize> = shifted
        .indices()
        .iter()
        .map(|al| a.basis().position(&al.plus(gamma)).expect("within degree bound"))
        .collect();
    let m = a.matrix();
    let n = src.len() * r;
    let out = CMatrix::from_fn(n, n, |x, y| m[(src[x / r] * r + x % r, src[y / r] * r + y % r)].clone());
    GramTable::from_matrix(a.dim(), w, r, a.kind(), out)
}

/// `S^k A = Σ_{|γ|=k} |γ|!/γ! σ^γ A`, restricted to degree bound `w`.
pub fn shift_power_sum(a: &GramTable, k: u32, w: u32) -> Result<CMatrix> {
    if k + w > a.degree() {
        return Err(Error::Window(format!("window {w} with k = {k} exceeds the degree bound {}", a.degree())));
    }
    let n = a.basis().prefix_len(w) * a.block();
    let mut acc = CMatrix::zeros(n, n);
    for gamma in enumerate_grade(a.dim(), k) {
        let s = backward_shift(a, &gamma)?;
        acc.add_assign_scaled(&s.matrix().leading(n), &Rational::from_integer(gamma.multinomial_weight()));
    }
    Ok(acc)
}

/// `Δ_{A,n} = Σ_j (−1)^{j+n} C(n, j) S^j A` on degree bound `N − n`.
pub fn defect(a: &GramTable, n: u32) -> Result<GramTable> {
    if n > a.degree() {
        return Err(Error::Window(format!("n = {n} exceeds the degree bound {}", a.degree())));
    }
    let w = a.degree() - n;
    let size = a.basis().prefix_len(w) * a.block();
    let mut acc = CMatrix::zeros(size, size);
    for j in 0..=n {
        let sign = if (j + n) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        acc.add_assign_scaled(&shift_power_sum(a, j, w)?, &Rational::from_integer(sign * binomial(n, j)));
    }
    GramTable::from_matrix(a.dim(), w, a.block(), a.kind(), acc)
}

/// `Δ_{A,n}` through `Δ_n = S Δ_{n−1} − Δ_{n−1}`.
pub fn defect_recursive(a: &GramTable, n: u32) -> Result<GramTable> {
    if n > a.degree() {
        return Err(Error::Window(format!("n = {n} exceeds the degree bound {}", a.degree())));
    }
    let mut cur = a.clone();
    for _ in 0..n {
        let w = cur.degree() - 1;
        let s = shift_power_sum(&cur, 1, w)?;
        let next = s.sub(&cur.restrict(w)?.matrix().clone());
        cur = GramTable::from_matrix(a.dim(), w, a.block(), a.kind(), next)?;
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionResult {
    pub holds: bool,
    /// Largest entry of the residual, in absolute value.
    pub residual: f64,
    pub window: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

fn condition(residual: &CMatrix, window: u32, k: Option<u32>) -> ConditionResult {
    ConditionResult {
        holds: residual.is_zero(),
        residual: residual.max_abs(),
        window,
        k,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub m: u32,
    pub degree: u32,
    /// `Δ_m = 0`.
    pub ii: ConditionResult,
    /// `S^k 𝒢 = Σ_{j<m} C(k, j) Δ_j` for `k = 0..=k_max`.
    pub iii: Vec<ConditionResult>,
    /// `S Δ_{m−1} = Δ_{m−1}`.
    pub iv: ConditionResult,
    /// `Δ_{m−1} ≥ 0` (exact).
    pub defect_psd: bool,
    /// The conditions are equivalent only under the wandering subspace
    /// property, which a truncation can confirm only up to its degree.
    pub assumption: &'static str,
}

impl TheoremReport {
    pub fn all_hold(&self) -> bool {
        self.ii.holds && self.iii.iter().all(|c| c.holds) && self.iv.holds
    }

    pub fn none_hold(&self) -> bool {
        !self.ii.holds && !self.iv.holds
    }
}

pub const WANDERING_ASSUMPTION: &str = "wandering subspace property assumed; checked only on the truncation";

/// Conditions (ii)–(iv) for `m` and `k ≤ k_max`, each on its largest valid
/// window.
pub fn check_theorem(a: &GramTable, m: u32, k_max: u32) -> Result<TheoremReport> {
    let n = a.degree();
    if m == 0 || m > n {
        return Err(Error::Window(format!("m = {m} needs 1 ≤ m ≤ {n}")));
    }
    let defects: Vec<GramTable> = (0..=m).map(|j| defect(a, j)).collect::<Result<_>>()?;
    let zero = |w: u32| CMatrix::zeros(a.basis().prefix_len(w) * a.block(), a.basis().prefix_len(w) * a.block());
    let dm = &defects[m as usize];
    let ii = condition(&dm.matrix().sub(&zero(dm.degree())), dm.degree(), None);
    let mut iii = Vec::new();
    for k in 0..=k_max {
        let top = k.max(m - 1);
        if top > n {
            break;
        }
        let w = n - top;
        let lhs = shift_power_sum(a, k, w)?;
        let size = lhs.rows();
        let mut rhs = CMatrix::zeros(size, size);
        for j in 0..m.min(k + 1) {
            rhs.add_assign_scaled(&defects[j as usize].matrix().leading(size), &Rational::from_integer(binomial(k, j)));
        }
        iii.push(condition(&lhs.sub(&rhs), w, Some(k)));
    }
    let dm1 = &defects[(m - 1) as usize];
    let w = dm1.degree() - 1;
    let s = shift_power_sum(dm1, 1, w)?;
    let iv = condition(&s.sub(&dm1.restrict(w)?.matrix().clone()), w, None);
    let defect_psd = psd_exact(&dm1.gram_matrix())?.psd;
    Ok(TheoremReport {
        m,
        degree: n,
        ii,
        iii,
        iv,
        defect_psd,
        assumption: WANDERING_ASSUMPTION,
    })
}

/// The Gramian of a tuple over an orthogonalized frame of its joint kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct Gramian {
    pub array: GramTable,
    /// Frame vectors in tuple coordinates.
    pub frame: Vec<Vec<ComplexRational>>,
    /// Whether the frame is orthonormal. Otherwise it is orthogonal, with
    /// norms whose squares are not rational squares; the array is then
    /// congruent to the orthonormal one by a constant diagonal scaling.
    pub normalized: bool,
    /// Largest degree occurring in the frame.
    pub frame_degree: u32,
    /// Whether `{T^α f_i}` spans `V_W ⊗ C^r` on the Gramian window `W`.
    pub wandering_on_window: bool,
}

/// `𝒢_{α,β} = [⟨T^α f_i, T^β f_j⟩]` for `|α|, |β| ≤ N − deg(frame)`.
pub fn gramian_of(t: &TruncatedTuple) -> Result<Gramian> {
    let kernel = t.joint_kernel()?;
    if kernel.dim() == 0 {
        return Err(Error::Domain("the joint kernel is trivial on this truncation".into()));
    }
    // Gram–Schmidt in the tuple's inner product.
    let mut frame: Vec<Vec<ComplexRational>> = Vec::new();
    let mut norms: Vec<Rational> = Vec::new();
    for v in &kernel.vectors {
        let mut u = v.clone();
        for (f, nf) in frame.iter().zip(&norms) {
            let c = t.inner(v, f) / ComplexRational::new(nf.clone(), Rational::zero());
            for (x, y) in u.iter_mut().zip(f) {
                *x -= &c * y;
            }
        }
        let n2 = t.inner(&u, &u).re;
        frame.push(u);
        norms.push(n2);
    }
    let mut normalized = true;
    for (f, n2) in frame.iter_mut().zip(&norms) {
        match rational_sqrt(n2) {
            Some(s) => {
                let inv = ComplexRational::new(Rational::one() / s, Rational::zero());
                for x in f.iter_mut() {
                    *x = &*x * &inv;
                }
            }
            None => normalized = false,
        }
    }
    let frame_degree = frame
        .iter()
        .flat_map(|f| {
            f.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, _)| t.coordinate_degree(i))
        })
        .max()
        .unwrap_or(0);
    let w = t.degree() - frame_degree;
    let basis = crate::multiindex::Basis::new(t.dim(), w);
    let r = frame.len();
    let mut images = Vec::with_capacity(basis.len() * r);
    for alpha in basis.indices() {
        for f in &frame {
            images.push(t.apply_power(alpha, f)?);
        }
    }
    let n = images.len();
    let matrix = CMatrix::from_fn(n, n, |x, y| t.inner(&images[x], &images[y]));
    let array = GramTable::from_matrix(t.dim(), w, r, TableKind::Gram, matrix)?;
    let span = CMatrix::from_fn(t.prefix(t.degree()), n, |i, c| images[c][i].clone());
    let coords = t.prefix(w);
    let with_basis = CMatrix::from_fn(span.rows(), n + coords, |i, c| {
        if c < n {
            span[(i, c)].clone()
        } else if i == c - n {
            crate::scalar::cone()
        } else {
            czero()
        }
    });
    let wandering_on_window = rank(&span) == rank(&with_basis);
    Ok(Gramian {
        array,
        frame,
        normalized,
        frame_degree,
        wandering_on_window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Measure;
    use crate::scalar::{cre, rat, rint};
    use crate::spaces::{gram, hardy_norm_sqr, lambda_c_norm_sqr, one_d_dirichlet, SpaceSpec};
    use crate::tuples::{scaled_pair, Verdict};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn shifts() {
        let g = gram(&SpaceSpec::hardy(2).unwrap(), 4).unwrap();
        assert_eq!(backward_shift(&g, &mi(&[0, 0])).unwrap(), g);
        let s1 = backward_shift(&g, &mi(&[1, 0])).unwrap();
        for a in s1.basis().indices() {
            assert_eq!(s1.scalar(a, a).unwrap(), &cre(hardy_norm_sqr(&a.bump(0))));
        }
        assert!(s1.is_diagonal());
        let s12 = backward_shift(&backward_shift(&g, &mi(&[1, 0])).unwrap(), &mi(&[0, 1])).unwrap();
        assert_eq!(s12, backward_shift(&g, &mi(&[1, 1])).unwrap());
        assert!(backward_shift(&g, &mi(&[3, 2])).is_err());
    }

    #[test]
    fn defect_formulas_agree() {
        let spec = SpaceSpec::b_lambda(rint(2), vec![cre(rat(1, 3)), cre(rat(-1, 4))]).unwrap();
        let g = gram(&spec, 5).unwrap();
        for n in 0..=4 {
            assert_eq!(defect(&g, n).unwrap(), defect_recursive(&g, n).unwrap());
        }
        assert_eq!(defect(&g, 0).unwrap(), g);
    }

    #[test]
    fn szego_defect() {
        let t = TruncatedTuple::from_space(&SpaceSpec::hardy(2).unwrap(), 4).unwrap();
        let gm = gramian_of(&t).unwrap();
        assert!(defect(&gm.array, 1).unwrap().matrix().is_zero());
    }

    #[test]
    fn lambda_c_gramian() {
        let (lambda, c) = (rint(3), vec![rint(1), rint(-1)]);
        let t = TruncatedTuple::from_space(&SpaceSpec::lambda_c(lambda.clone(), c.clone()).unwrap(), 5).unwrap();
        let gm = gramian_of(&t).unwrap();
        assert!(gm.normalized && gm.wandering_on_window);
        assert_eq!(gm.frame_degree, 0);
        for a in gm.array.basis().indices() {
            assert_eq!(gm.array.scalar(a, a).unwrap(), &cre(lambda_c_norm_sqr(&lambda, &c, a)));
        }
        let rep = check_theorem(&gm.array, 2, 3).unwrap();
        assert!(rep.all_hold() && rep.defect_psd);
        assert!(defect(&gm.array, 2).unwrap().matrix().is_zero());
    }

    #[test]
    fn drury_arveson_conditions() {
        let t = TruncatedTuple::from_space(&SpaceSpec::drury_arveson(2).unwrap(), 5).unwrap();
        let gm = gramian_of(&t).unwrap();
        assert!(check_theorem(&gm.array, 2, 3).unwrap().all_hold());
        let one = check_theorem(&gm.array, 1, 3).unwrap();
        assert!(!one.ii.holds);
        let d1 = defect(&gm.array, 1).unwrap();
        assert!(!d1.scalar(&mi(&[0, 0]), &mi(&[0, 0])).unwrap().is_zero());
        assert!(one.none_hold());
    }

    #[test]
    fn scaled_pair_gramian() {
        let t0 = TruncatedTuple::multiplication(one_d_dirichlet(&Measure::surface(1).unwrap(), 6).unwrap()).unwrap();
        let pair = scaled_pair(&t0, 2).unwrap();
        let gm = gramian_of(&pair).unwrap();
        for a in gm.array.basis().indices() {
            for b in gm.array.basis().indices() {
                let expect = if a.order() == b.order() {
                    cre(rint(1 + a.order() as i64) / rint(1 << a.order()))
                } else {
                    cre(rint(0))
                };
                assert_eq!(gm.array.scalar(a, b).unwrap(), &expect);
            }
        }
        assert!(check_theorem(&gm.array, 2, 3).unwrap().all_hold());
        let hardy = TruncatedTuple::from_space(&SpaceSpec::hardy(1).unwrap(), 4).unwrap();
        let gm = gramian_of(&hardy).unwrap();
        assert!(gm.array.matrix() == &CMatrix::identity(5));
    }

    #[test]
    fn classification_matches_defects() {
        for spec in [
            SpaceSpec::hardy(2).unwrap(),
            SpaceSpec::drury_arveson(3).unwrap(),
            SpaceSpec::hp(3, rint(2)).unwrap(),
            SpaceSpec::lambda_c(rint(2), vec![rint(1), rint(-1)]).unwrap(),
        ] {
            let t = TruncatedTuple::from_space(&spec, 6).unwrap();
            let gm = gramian_of(&t).unwrap();
            for m in 1..=3 {
                let iso = t.classify(m).unwrap().verdict == Verdict::Isometry;
                assert_eq!(iso, defect(&gm.array, m).unwrap().matrix().is_zero(), "{spec:?} m={m}");
            }
        }
    }
}
