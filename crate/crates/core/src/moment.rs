//! The spherical complex moment problem on truncated tables: forward moments
//! of measures, positivity and spherical Toeplitz tests, the truncated GNS
//! construction, moment kernels of m-isometries, and atomic recovery.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dirichlet::{dirichlet_inner, VectorPolynomial};
use crate::error::{Error, Result};
use crate::gramian::{defect, gramian_of};
use crate::linalg::{hermitian_eigen_range, psd_exact, solve, CMatrix};
use crate::measures::Measure;
use crate::multiindex::{enumerate_grade, MultiIndex};
use crate::poisson::McConfig;
use crate::scalar::{c_to_f64, cone, czero, ComplexRational, Rational};
use crate::table::{block_transpose, GramTable, TableKind};
use crate::tuples::{TruncatedTuple, Verdict};

/// `φ(α, β) = ∫ ζ^α ζ̄^β dF` for `|α|, |β| ≤ degree`.
pub fn forward_moments(mu: &Measure, degree: u32) -> GramTable {
    GramTable::from_blocks(mu.dim(), degree, mu.block_size(), TableKind::Moment, |a, b| mu.moment(a, b))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentCheck {
    /// Exact positive semidefiniteness of the associated Gram matrix.
    pub psd: bool,
    pub rank: usize,
    pub min_eigenvalue: f64,
    /// `Σ_j φ(α+ε_j, β+ε_j) = φ(α, β)` for `|α|, |β| ≤ N − 1`.
    pub toeplitz: bool,
    pub toeplitz_residual: f64,
}

impl MomentCheck {
    pub fn passes(&self) -> bool {
        self.psd && self.toeplitz
    }
}

/// The spherical Toeplitz residual on `|α|, |β| ≤ N − 1`.
pub fn toeplitz_residual(phi: &GramTable) -> Result<CMatrix> {
    if phi.degree() == 0 {
        return Err(Error::Window("the Toeplitz condition needs N ≥ 1".into()));
    }
    let w = phi.degree() - 1;
    let shifted = crate::gramian::shift_power_sum(phi, 1, w)?;
    Ok(shifted.sub(&phi.restrict(w)?.matrix().clone()))
}

pub fn check_conditions(phi: &GramTable) -> Result<MomentCheck> {
    let g = phi.gram_matrix();
    if !g.is_hermitian() {
        return Err(Error::invalid("moment table is not Hermitian"));
    }
    let p = psd_exact(&g)?;
    let eig = hermitian_eigen_range(&g.to_f64());
    let res = toeplitz_residual(phi)?;
    Ok(MomentCheck {
        psd: p.psd,
        rank: if p.psd { p.rank } else { 0 },
        min_eigenvalue: eig.min,
        toeplitz: res.is_zero(),
        toeplitz_residual: res.max_abs(),
    })
}

/// Output of the truncated GNS construction.
#[derive(Clone, Debug)]
pub struct GnsModel {
    /// Multiplication by `z_j` on `V_N ⊗ C^r` with the semi-inner product
    /// of `φ`; null vectors are identified implicitly by every form.
    pub tuple: TruncatedTuple,
    pub quotient_dim: usize,
    /// Monomials `(α, s)` whose classes form a basis of the quotient.
    pub representatives: Vec<(MultiIndex, usize)>,
    /// Gram matrix of the representatives (positive definite).
    pub reduced_gram: CMatrix,
}

impl GnsModel {
    /// Matrix of `S_j` in the representative basis. Needs every
    /// representative to have degree `≤ N − 1` and the classes of
    /// `V_N ⊗ C^r` to be spanned by those of `V_{N−1} ⊗ C^r`.
    pub fn shift_matrix(&self, j: usize) -> Result<CMatrix> {
        let t = &self.tuple;
        let r = t.block();
        let n = t.degree();
        if self.representatives.iter().any(|(a, _)| a.order() >= n) {
            return Err(Error::Window("the quotient is not flat on this truncation".into()));
        }
        let g = t.gram().matrix();
        let idx: Vec<usize> = self
            .representatives
            .iter()
            .map(|(a, s)| t.basis().position(a).expect("in basis") * r + s)
            .collect();
        let q = idx.len();
        // Σ_k c_k ⟨e_k, e_p'⟩ = ⟨z_j e_p, e_p'⟩ for all representatives p'.
        let a = CMatrix::from_fn(q, q, |p2, k| g[(idx[k], idx[p2])].clone());
        let b = CMatrix::from_fn(q, q, |p2, p| {
            let (alpha, s) = &self.representatives[p];
            let target = t.basis().position(&alpha.bump(j)).expect("degree ≤ N") * r + s;
            g[(target, idx[p2])].clone()
        });
        let m = solve(&a, &b)?;
        // Flatness: z_j e_p − Σ c_k e_k must be a null vector.
        for p in 0..q {
            let (alpha, s) = &self.representatives[p];
            let mut v = vec![czero(); t.prefix(n)];
            v[t.basis().position(&alpha.bump(j)).expect("degree ≤ N") * r + s] = cone();
            for k in 0..q {
                v[idx[k]] -= m[(k, p)].clone();
            }
            if !t.inner(&v, &v).is_zero() {
                return Err(Error::Window("the quotient is not flat on this truncation".into()));
            }
        }
        Ok(m)
    }
}

/// Quotient of `V_N ⊗ C^r` by the null space of
/// `⟨z^α x, z^β y⟩ = ⟨φ(α, β) x, y⟩`, with the induced multiplication tuple.
pub fn gns(phi: &GramTable) -> Result<GnsModel> {
    let check = check_conditions(phi)?;
    if !check.psd {
        return Err(Error::NotPsd("moment table".into()));
    }
    if !check.toeplitz {
        return Err(Error::precondition("moment table fails the spherical Toeplitz condition"));
    }
    let g = phi.gram_matrix();
    let r = phi.block();
    let table = GramTable::from_matrix(phi.dim(), phi.degree(), r, TableKind::Gram, g.clone())?;
    let tuple = TruncatedTuple::multiplication(table)?;
    let mut pivots = psd_exact(&g)?.pivots;
    pivots.sort_unstable();
    let representatives = pivots
        .iter()
        .map(|&p| (phi.basis().get(p / r).clone(), p % r))
        .collect();
    Ok(GnsModel {
        quotient_dim: pivots.len(),
        reduced_gram: g.select(&pivots, &pivots),
        representatives,
        tuple,
    })
}

/// `φ(α, β)_{ij} = Σ_{j'<m} (−1)^{j'+m−1} C(m−1, j') ⟨Q_T^{j'}(I) T^α f_j, T^β f_i⟩`
/// over an orthonormal frame `{f_i}` of the joint kernel. For a spherical
/// model this is `∫ ζ^α ζ̄^β dF`.
pub fn miso_kernel(t: &TruncatedTuple, m: u32) -> Result<GramTable> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    let c = t.classify(m)?;
    if c.verdict != Verdict::Isometry {
        return Err(Error::precondition(format!("tuple is not an {m}-isometry on the window ({:?})", c.verdict)));
    }
    let gm = gramian_of(t)?;
    if !gm.normalized {
        return Err(Error::precondition("the joint-kernel frame cannot be normalized over the rationals"));
    }
    let delta = defect(&gm.array, m - 1)?;
    let r = delta.block();
    GramTable::from_matrix(
        delta.dim(),
        delta.degree(),
        r,
        TableKind::Moment,
        block_transpose(delta.matrix(), r),
    )
}

/// Residual of
/// `⟨Q_T^k T^α 1, T^β 1⟩ − ⟨T^α 1, T^β 1⟩ = Σ_{|γ|=k} |γ|!/γ! ⟨z^{α+γ}, z^{β+γ}⟩_{D(μ)} − ⟨z^α, z^β⟩_{D(μ)}`
/// for `T = M_z` on a truncation of `D(μ)` whose joint kernel is the constants.
pub fn verify_model(t: &TruncatedTuple, mu: &Measure, k: u32, alpha: &MultiIndex, beta: &MultiIndex) -> Result<ComplexRational> {
    if t.classify(2)?.verdict != Verdict::Isometry {
        return Err(Error::precondition("tuple is not a 2-isometry on the window"));
    }
    let gm = gramian_of(t)?;
    let f = &gm.frame;
    if f.len() != 1 || !f[0][0].is_one() || f[0][1..].iter().any(|x| !x.is_zero()) {
        return Err(Error::precondition("the joint kernel must be spanned by the constant 1"));
    }
    let top = alpha.order().max(beta.order());
    if k + top > t.degree() {
        return Err(Error::Window(format!("k + max(|α|, |β|) exceeds the degree bound {}", t.degree())));
    }
    let q = t.qt_form(k)?;
    let (a, b) = (
        t.basis().position(alpha).ok_or_else(|| Error::invalid("α outside the basis"))?,
        t.basis().position(beta).ok_or_else(|| Error::invalid("β outside the basis"))?,
    );
    let lhs = &q.matrix[(a, b)] - &t.gram().matrix()[(a, b)];
    let cfg = McConfig::new(1, 0);
    let exact = |x: &MultiIndex, y: &MultiIndex| -> Result<ComplexRational> {
        dirichlet_inner(&VectorPolynomial::monomial(x), &VectorPolynomial::monomial(y), mu, &cfg)?
            .exact()
            .cloned()
            .ok_or_else(|| Error::precondition("model check needs an exact D(μ) inner product"))
    };
    let mut rhs = -exact(alpha, beta)?;
    for gamma in enumerate_grade(t.dim(), k) {
        let w = Rational::from_integer(gamma.multinomial_weight());
        rhs += exact(&alpha.plus(&gamma), &beta.plus(&gamma))?.scale(w);
    }
    Ok(lhs - rhs)
}

/// A finite atomic measure recovered from a flat moment table.
#[derive(Clone, Debug, Serialize)]
pub struct AtomicRecovery {
    pub points: Vec<Vec<Complex64>>,
    pub weights: Vec<f64>,
    /// Largest `|φ(α, β) − Σ w_i ζ_i^α ζ̄_i^β|` over the table.
    pub max_residual: f64,
}

/// Recovers a scalar atomic measure with `support ≤ 3` atoms from its
/// moments: the atoms are the joint eigenvalues of the GNS shifts and the
/// weights solve a Vandermonde system.
pub fn recover_atomic(phi: &GramTable, support: usize) -> Result<AtomicRecovery> {
    if !(1..=3).contains(&support) {
        return Err(Error::invalid("support size must be 1, 2 or 3"));
    }
    recover_flat(phi, support)
}

/// Trigonometric moment problem on the circle: a positive semidefinite
/// singular Toeplitz table determines a unique atomic measure.
pub fn recover_trigonometric(phi: &GramTable) -> Result<AtomicRecovery> {
    if phi.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: phi.dim(),
        });
    }
    let check = check_conditions(phi)?;
    if !check.passes() {
        return Err(Error::precondition("table is not a positive Toeplitz table"));
    }
    if check.rank > phi.degree() as usize {
        return Err(Error::precondition(
            "Toeplitz table is positive definite; the measure is not determined by these moments",
        ));
    }
    recover_flat(phi, check.rank)
}

fn recover_flat(phi: &GramTable, support: usize) -> Result<AtomicRecovery> {
    if phi.block() != 1 {
        return Err(Error::invalid("recovery needs a scalar table"));
    }
    let model = gns(phi)?;
    if model.quotient_dim != support {
        return Err(Error::precondition(format!(
            "table has rank {}, not {support}",
            model.quotient_dim
        )));
    }
    let d = phi.dim();
    let shifts: Vec<DMatrix<Complex64>> = (0..d)
        .map(|j| model.shift_matrix(j).map(|m| m.to_f64()))
        .collect::<Result<_>>()?;
    // A generic combination separates the joint eigenvalues.
    let mut comb = DMatrix::<Complex64>::zeros(support, support);
    for (j, s) in shifts.iter().enumerate() {
        comb += s * Complex64::new(1.0 / (j as f64 + 1.0).sqrt(), 0.1 * j as f64);
    }
    let eig = comb
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Domain("eigenvalue computation failed".into()))?;
    let mut points = Vec::with_capacity(support);
    for lam in eig.iter() {
        let shifted = &comb - DMatrix::<Complex64>::identity(support, support) * *lam;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.ok_or_else(|| Error::Domain("SVD failed".into()))?;
        let imin = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("nonempty");
        let v = vt.row(imin).adjoint();
        let vv = v.dotc(&v);
        points.push(shifts.iter().map(|s| v.dotc(&(s * &v)) / vv).collect::<Vec<_>>());
    }
    // Weights from φ(α, 0) = Σ_i w_i ζ_i^α.
    let basis = phi.basis();
    let zero = MultiIndex::zero(d);
    let mono = |p: &[Complex64], a: &MultiIndex| -> Complex64 {
        p.iter().zip(a.entries()).map(|(z, &e)| z.powu(e)).product()
    };
    let rows = basis.len();
    let v = DMatrix::<Complex64>::from_fn(rows, support, |i, k| mono(&points[k], basis.get(i)));
    let rhs = DMatrix::<Complex64>::from_fn(rows, 1, |i, _| c_to_f64(phi.scalar(basis.get(i), &zero).expect("in basis")));
    let sol = v
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Domain(e.to_string()))?;
    let weights: Vec<f64> = sol.iter().map(|w| w.re).collect();
    let mut max_residual = 0.0f64;
    for a in basis.indices() {
        for b in basis.indices() {
            let model: Complex64 = points
                .iter()
                .zip(&weights)
                .map(|(p, w)| mono(p, a) * mono(p, b).conj() * *w)
                .sum();
            let actual = c_to_f64(phi.scalar(a, b).expect("in basis"));
            max_residual = max_residual.max((model - actual).norm());
        }
    }
    Ok(AtomicRecovery {
        points,
        weights,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{make_b_lambda, make_lambda_c, random_sphere_point, stereographic_point, Atom, AtomWeight};
    use crate::multiindex::enumerate_upto;
    use crate::scalar::{cr, cre, rat, rint};
    use crate::spaces::{hardy_norm_sqr, SpaceSpec};
    use rand::SeedableRng;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn point(d: usize, t: &[i64]) -> Vec<ComplexRational> {
        stereographic_point(d, &t.iter().map(|&x| rat(x, 3)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn surface_moments() {
        for d in 1..=3 {
            let phi = forward_moments(&Measure::surface(d).unwrap(), 3);
            for a in phi.basis().indices() {
                for b in phi.basis().indices() {
                    let expect = if a == b { cre(hardy_norm_sqr(a)) } else { czero() };
                    assert_eq!(phi.scalar(a, b).unwrap(), &expect);
                }
            }
            let c = check_conditions(&phi).unwrap();
            assert!(c.passes());
            assert_eq!(c.toeplitz_residual, 0.0);
        }
    }

    #[test]
    fn dirac_moments() {
        let z = point(2, &[1, -2, 4]);
        let mu = Measure::dirac(z.clone()).unwrap();
        let phi = forward_moments(&mu, 3);
        for a in phi.basis().indices() {
            for b in phi.basis().indices() {
                let za: ComplexRational = z.iter().zip(a.entries()).map(|(x, &e)| num_traits::pow(x.clone(), e as usize)).product();
                let zb: ComplexRational = z.iter().zip(b.entries()).map(|(x, &e)| num_traits::pow(x.clone(), e as usize)).product();
                assert_eq!(phi.scalar(a, b).unwrap(), &(za * zb.conj()));
            }
        }
        assert!(check_conditions(&phi).unwrap().passes());
        let model = gns(&phi).unwrap();
        assert_eq!(model.quotient_dim, 1);
        for j in 0..2 {
            let m = model.shift_matrix(j).unwrap();
            assert_eq!(m[(0, 0)], z[j]);
        }
    }

    #[test]
    fn matrix_atom_moments() {
        let z = point(2, &[2, 1, -1]);
        let w = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => cre(rint(2)),
            (1, 1) => cre(rint(1)),
            (0, 1) => cr(rat(1, 2), rat(1, 3)),
            _ => cr(rat(1, 2), rat(-1, 3)),
        });
        let mu = Measure::atomic(vec![Atom::new(z.clone(), AtomWeight::Matrix(w.clone())).unwrap()]).unwrap();
        let phi = forward_moments(&mu, 2);
        let a = mi(&[1, 0]);
        let b = mi(&[0, 2]);
        let za = z[0].clone();
        let zb = (z[1].clone() * z[1].clone()).conj();
        assert_eq!(phi.entry(&a, &b).unwrap(), w.scale(&(za * zb)));
        let c = check_conditions(&phi).unwrap();
        assert!(c.passes());
        let model = gns(&phi).unwrap();
        assert_eq!(model.quotient_dim, 2);
        assert_eq!(model.tuple.classify(1).unwrap().verdict, Verdict::Isometry);
    }

    #[test]
    fn non_toeplitz_table() {
        let phi = GramTable::from_scalar_fn(2, 2, TableKind::Moment, |a, b| {
            if a == b && a.is_zero() { cre(rint(2)) } else { czero() }
        });
        let c = check_conditions(&phi).unwrap();
        assert!(c.psd && !c.toeplitz);
        assert!(gns(&phi).is_err());
    }

    #[test]
    fn gns_round_trips() {
        let sigma = forward_moments(&Measure::surface(2).unwrap(), 3);
        let m = gns(&sigma).unwrap();
        assert_eq!(m.quotient_dim, 10);
        assert_eq!(m.tuple.classify(1).unwrap().verdict, Verdict::Isometry);
        let two = Measure::atomic(vec![
            Atom::new(point(2, &[1, 0, 2]), AtomWeight::Scalar(rat(1, 2))).unwrap(),
            Atom::new(point(2, &[-1, 3, 1]), AtomWeight::Scalar(rat(3, 2))).unwrap(),
        ])
        .unwrap();
        for n in 1..=3 {
            let m = gns(&forward_moments(&two, n)).unwrap();
            assert_eq!(m.quotient_dim, 2);
            assert_eq!(m.tuple.classify(1).unwrap().verdict, Verdict::Isometry);
        }
    }

    #[test]
    fn extraction_matches_forward_moments() {
        for mu in [
            make_lambda_c(&rint(3), &[rint(1), rint(-1)]).unwrap(),
            make_b_lambda(&rint(1), &[cr(rat(1, 4), rat(1, 8)), cre(rat(-1, 6))]).unwrap(),
        ] {
            let spec = SpaceSpec::Dirichlet(mu.clone());
            let t = TruncatedTuple::from_space(&spec, 5).unwrap();
            let phi = miso_kernel(&t, 2).unwrap();
            assert_eq!(phi.degree(), 4);
            assert_eq!(phi, forward_moments(&mu, 4));
            assert!(check_conditions(&phi).unwrap().passes());
        }
        let szego = TruncatedTuple::from_space(&SpaceSpec::hardy(2).unwrap(), 4).unwrap();
        assert_eq!(miso_kernel(&szego, 1).unwrap(), forward_moments(&Measure::surface(2).unwrap(), 4));
    }

    #[test]
    fn model_residuals() {
        for mu in [
            make_lambda_c(&rint(2), &[rat(1, 2), rat(-1, 2)]).unwrap(),
            make_b_lambda(&rint(1), &[cre(rat(1, 4)), czero()]).unwrap(),
        ] {
            let t = TruncatedTuple::from_space(&SpaceSpec::Dirichlet(mu.clone()), 5).unwrap();
            for k in 0..=3 {
                for a in enumerate_upto(2, 2) {
                    for b in enumerate_upto(2, 2) {
                        assert!(verify_model(&t, &mu, k, &a, &b).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn atomic_recovery_and_uniqueness() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut tables = Vec::new();
        for s in 1..=3usize {
            for _ in 0..3 {
                let atoms: Vec<Atom> = (0..s)
                    .map(|i| Atom::new(random_sphere_point(&mut rng, 2), AtomWeight::Scalar(rat(i as i64 + 1, 2))).unwrap())
                    .collect();
                let mu = Measure::atomic(atoms.clone()).unwrap();
                let phi = forward_moments(&mu, 3);
                let rec = recover_atomic(&phi, s).unwrap();
                assert!(rec.max_residual < 1e-9, "{}", rec.max_residual);
                let mut got = rec.weights.clone();
                got.sort_by(f64::total_cmp);
                let expect: Vec<f64> = (0..s).map(|i| (i as f64 + 1.0) / 2.0).collect();
                for (g, e) in got.iter().zip(&expect) {
                    assert!((g - e).abs() < 1e-9);
                }
                tables.push(phi);
            }
        }
        for i in 0..tables.len() {
            for j in i + 1..tables.len() {
                assert_ne!(tables[i], tables[j]);
            }
        }
    }

    #[test]
    fn trigonometric_recovery() {
        let z1 = point(1, &[2]);
        let z2 = point(1, &[-5]);
        let mu = Measure::atomic(vec![
            Atom::new(z1.clone(), AtomWeight::Scalar(rint(1))).unwrap(),
            Atom::new(z2, AtomWeight::Scalar(rat(1, 3))).unwrap(),
        ])
        .unwrap();
        let rec = recover_trigonometric(&forward_moments(&mu, 3)).unwrap();
        assert_eq!(rec.points.len(), 2);
        assert!(rec.max_residual < 1e-10);
        let target = c_to_f64(&z1[0]);
        assert!(rec.points.iter().any(|p| (p[0] - target).norm() < 1e-10));
        assert!(recover_trigonometric(&forward_moments(&Measure::surface(1).unwrap(), 3)).is_err());
    }
}
