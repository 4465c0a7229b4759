//! Model spaces with exact monomial Gram data: the `H_p` family (Hardy and
//! Drury–Arveson among them), Dirichlet-type spaces `D(μ)` for harmonic
//! polynomial weights, and the two `D(μ)` example families.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::HermitianPolynomial;
use crate::measures::{make_b_lambda, make_lambda_c, Measure, MeasureSpec};
use crate::multiindex::{factorial, MultiIndex};
use crate::scalar::{cre, czero, ComplexInput, ComplexRational, Exact, Rational};
pub use crate::table::{GramTable, TableKind, TableWire};

/// A space of holomorphic functions on `B^d` in which polynomials are dense.
#[derive(Clone, Debug, PartialEq)]
pub enum SpaceSpec {
    /// Reproducing kernel `1/(1 − ⟨z, w⟩)^p`; `p = d` is `H²(B^d)`, `p = 1`
    /// the Drury–Arveson space.
    Hp { d: usize, p: Rational },
    /// `D(μ)` for the weight `λ + Σ c_j |z_j|²`.
    DirichletLambdaC { lambda: Rational, c: Vec<Rational> },
    /// `D(μ)` for the weight `λ + Σ (b_j z_j + b̄_j z̄_j)`.
    DirichletBLambda { lambda: Rational, b: Vec<ComplexRational> },
    /// `D(μ)` for a general measure.
    Dirichlet(Measure),
    Custom(GramTable),
}

impl SpaceSpec {
    pub fn hp(d: usize, p: Rational) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("d must be positive"));
        }
        if p <= Rational::zero() {
            return Err(Error::invalid("H_p requires p > 0"));
        }
        Ok(SpaceSpec::Hp { d, p })
    }

    pub fn hardy(d: usize) -> Result<Self> {
        Self::hp(d, Rational::from_integer(d.into()))
    }

    pub fn drury_arveson(d: usize) -> Result<Self> {
        Self::hp(d, Rational::one())
    }

    pub fn lambda_c(lambda: Rational, c: Vec<Rational>) -> Result<Self> {
        make_lambda_c(&lambda, &c)?;
        Ok(SpaceSpec::DirichletLambdaC { lambda, c })
    }

    pub fn b_lambda(lambda: Rational, b: Vec<ComplexRational>) -> Result<Self> {
        make_b_lambda(&lambda, &b)?;
        Ok(SpaceSpec::DirichletBLambda { lambda, b })
    }

    pub fn dim(&self) -> usize {
        match self {
            SpaceSpec::Hp { d, .. } => *d,
            SpaceSpec::DirichletLambdaC { c, .. } => c.len(),
            SpaceSpec::DirichletBLambda { b, .. } => b.len(),
            SpaceSpec::Dirichlet(m) => m.dim(),
            SpaceSpec::Custom(t) => t.dim(),
        }
    }

    /// The measure of a Dirichlet-type space.
    pub fn measure(&self) -> Option<Measure> {
        match self {
            SpaceSpec::DirichletLambdaC { lambda, c } => make_lambda_c(lambda, c).ok(),
            SpaceSpec::DirichletBLambda { lambda, b } => make_b_lambda(lambda, b).ok(),
            SpaceSpec::Dirichlet(m) => Some(m.clone()),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SpaceSpec::Hp { d, p } => format!("H_p(p={}, d={d})", crate::scalar::fmt_rational(p)),
            SpaceSpec::DirichletLambdaC { .. } | SpaceSpec::DirichletBLambda { .. } | SpaceSpec::Dirichlet(_) => {
                format!("D({})", self.measure().expect("valid spec").describe())
            }
            SpaceSpec::Custom(t) => format!("custom(d={}, N={})", t.dim(), t.degree()),
        }
    }
}

/// Wire form of a space.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpaceInput {
    Hp { d: usize, p: Exact },
    Hardy { d: usize },
    DruryArveson { d: usize },
    LambdaC { d: usize, lambda: Exact, c: Vec<Exact> },
    BLambda { d: usize, lambda: Exact, b: Vec<ComplexInput> },
    Dirichlet { measure: MeasureSpec },
    Custom { table: TableWire },
}

impl SpaceInput {
    pub fn build(&self) -> Result<SpaceSpec> {
        let check = |d: usize, n: usize| {
            if d != n {
                Err(Error::DimensionMismatch { expected: d, found: n })
            } else {
                Ok(())
            }
        };
        match self {
            SpaceInput::Hp { d, p } => SpaceSpec::hp(*d, p.0.clone()),
            SpaceInput::Hardy { d } => SpaceSpec::hardy(*d),
            SpaceInput::DruryArveson { d } => SpaceSpec::drury_arveson(*d),
            SpaceInput::LambdaC { d, lambda, c } => {
                check(*d, c.len())?;
                SpaceSpec::lambda_c(lambda.0.clone(), c.iter().map(|x| x.0.clone()).collect())
            }
            SpaceInput::BLambda { d, lambda, b } => {
                check(*d, b.len())?;
                SpaceSpec::b_lambda(lambda.0.clone(), b.iter().map(ComplexInput::value).collect())
            }
            SpaceInput::Dirichlet { measure } => Ok(SpaceSpec::Dirichlet(measure.build()?)),
            SpaceInput::Custom { table } => Ok(SpaceSpec::Custom(GramTable::from_wire(table)?)),
        }
    }
}

/// `α! (d−1)!/(|α|+d−1)!`, the `H²(B^d)` norm² of `z^α`.
pub fn hardy_norm_sqr(alpha: &MultiIndex) -> Rational {
    let d = alpha.dim() as u32;
    Rational::new(alpha.factorial() * factorial(d - 1), factorial(alpha.order() + d - 1))
}

fn ball_monomial(a: &MultiIndex) -> Rational {
    let d = a.dim() as u32;
    Rational::new(a.factorial() * factorial(d), factorial(a.order() + d))
}

/// Rising factorial `(p)_n`.
fn pochhammer(p: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::one(), |acc, k| acc * (p + Rational::from_integer(k.into())))
}

/// Exact monomial Gram table of `spec` for `|α|, |β| ≤ degree`.
pub fn gram(spec: &SpaceSpec, degree: u32) -> Result<GramTable> {
    let d = spec.dim();
    match spec {
        SpaceSpec::Hp { p, .. } => Ok(GramTable::from_scalar_fn(d, degree, TableKind::Gram, |a, b| {
            if a == b {
                cre(Rational::from_integer(a.factorial()) / pochhammer(p, a.order()))
            } else {
                czero()
            }
        })),
        SpaceSpec::Custom(t) => t.restrict(degree),
        _ => dirichlet_gram(&spec.measure().expect("Dirichlet-type spec"), degree),
    }
}

/// Monomial Gram table of `D(μ)`. Exact for harmonic polynomial densities
/// (via `∫ z^a z̄^b dV = δ_{ab} a! d!/(|a|+d)!`) and for atomic measures on
/// the circle (via the local Dirichlet integral).
pub fn dirichlet_gram(mu: &Measure, degree: u32) -> Result<GramTable> {
    if mu.is_matrix_valued() {
        return Err(Error::precondition("monomial Gram tables need a scalar measure"));
    }
    let d = mu.dim();
    if let Some(w) = mu.harmonic_density() {
        let terms: Vec<(MultiIndex, MultiIndex, ComplexRational)> =
            w.terms().map(|(a, b, c)| (a.clone(), b.clone(), c.clone())).collect();
        let inv_d = Rational::new(BigInt::one(), BigInt::from(d));
        return Ok(GramTable::from_scalar_fn(d, degree, TableKind::Gram, |a, b| {
            let mut v = if a == b { cre(hardy_norm_sqr(a)) } else { czero() };
            for j in 0..d {
                let (Some(a1), Some(b1)) = (a.lower(j), b.lower(j)) else {
                    continue;
                };
                let ab = Rational::from_integer(BigInt::from(a[j]) * BigInt::from(b[j])) * &inv_d;
                for (g, h, c) in &terms {
                    let x = a1.plus(g);
                    if x == b1.plus(h) {
                        v += c.scale(ball_monomial(&x) * &ab);
                    }
                }
            }
            v
        }));
    }
    if d == 1 && !mu.atoms().is_empty() {
        return Ok(GramTable::from_scalar_fn(1, degree, TableKind::Gram, |a, b| {
            local_dirichlet_1d(mu, a[0], b[0])
        }));
    }
    if mu.density().is_some() {
        return Err(Error::precondition("exact Gram tables need a harmonic density"));
    }
    Err(Error::precondition(
        "exact Gram tables for atomic measures are available only for d = 1",
    ))
}

/// `⟨z^m, z^n⟩_{D(ν)}` on the disc for atomic `ν`, using
/// `D_ζ(f, g) = ⟨(f − f(ζ))/(z − ζ), (g − g(ζ))/(z − ζ)⟩_{H²}`.
fn local_dirichlet_1d(mu: &Measure, m: u32, n: u32) -> ComplexRational {
    let mut v = if m == n { crate::scalar::cone() } else { czero() };
    for atom in mu.atoms() {
        let zeta = &atom.point()[0];
        let w = atom.weight().as_matrix()[(0, 0)].clone();
        // (z^m − ζ^m)/(z − ζ) = Σ_{k<m} ζ^{m−1−k} z^k
        let quotient = |m: u32| -> Vec<ComplexRational> {
            (0..m)
                .map(|k| num_traits::pow(zeta.clone(), (m - 1 - k) as usize))
                .collect()
        };
        let (p, q) = (quotient(m), quotient(n));
        let pairing = p.iter().zip(&q).fold(czero(), |acc, (x, y)| acc + x * y.conj());
        v += pairing * w;
    }
    v
}

/// `L(k) = 1 + λk`.
pub fn l_factor(lambda: &Rational, k: u32) -> Rational {
    Rational::one() + lambda * Rational::from_integer(k.into())
}

/// `K_c(α) = ((|α| − 1)/(|α| + d)) Σ c_k α_k`.
pub fn k_factor(c: &[Rational], alpha: &MultiIndex) -> Rational {
    let d = c.len() as i64;
    let n = alpha.order() as i64;
    let s: Rational = c
        .iter()
        .zip(alpha.entries())
        .map(|(ck, &ak)| ck * Rational::from_integer(ak.into()))
        .sum();
    Rational::new((n - 1).into(), (n + d).into()) * s
}

/// The closed-form `D(μ_{λ,c})` norm² `α!(d−1)!/(|α|+d−1)! · (L(|α|) + K_c(α))`.
pub fn lambda_c_norm_sqr(lambda: &Rational, c: &[Rational], alpha: &MultiIndex) -> Rational {
    hardy_norm_sqr(alpha) * (l_factor(lambda, alpha.order()) + k_factor(c, alpha))
}

/// Squared multishift weight `‖z^{α+ε_j}‖²/‖z^α‖²` of `M_{z_j}` on `D(μ_{λ,c})`.
pub fn multishift_weights(spec: &SpaceSpec, alpha: &MultiIndex, j: usize) -> Result<Rational> {
    let SpaceSpec::DirichletLambdaC { lambda, c } = spec else {
        return Err(Error::invalid("multishift weights are defined for the λ_c family"));
    };
    if alpha.dim() != c.len() || j >= c.len() {
        return Err(Error::DimensionMismatch {
            expected: c.len(),
            found: alpha.dim().max(j + 1),
        });
    }
    let n = alpha.order();
    let d = c.len() as u32;
    let up = alpha.bump(j);
    let ratio = Rational::new((alpha[j] + 1).into(), (n + d).into());
    Ok(ratio * (l_factor(lambda, n + 1) + k_factor(c, &up)) / (l_factor(lambda, n) + k_factor(c, alpha)))
}

/// Diagonal Gram of `D(ν)` on the disc.
pub fn one_d_dirichlet(nu: &Measure, degree: u32) -> Result<GramTable> {
    if nu.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: nu.dim(),
        });
    }
    dirichlet_gram(nu, degree)
}

/// Convenience: the harmonic density of a Dirichlet spec.
pub fn density(spec: &SpaceSpec) -> Option<HermitianPolynomial> {
    spec.measure().and_then(|m| m.harmonic_density())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::{dirichlet_inner, VectorPolynomial};
    use crate::multiindex::enumerate_upto;
    use crate::poisson::McConfig;
    use crate::scalar::{cone, cr, rat, rint};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    #[test]
    fn hp_diagonals() {
        for d in 1..=3usize {
            let da = gram(&SpaceSpec::drury_arveson(d).unwrap(), 4).unwrap();
            let h2 = gram(&SpaceSpec::hardy(d).unwrap(), 4).unwrap();
            for a in enumerate_upto(d, 4) {
                let expect = Rational::new(a.factorial(), factorial(a.order()));
                assert_eq!(da.scalar(&a, &a).unwrap(), &cre(expect));
                assert_eq!(h2.scalar(&a, &a).unwrap(), &cre(hardy_norm_sqr(&a)));
            }
            assert!(da.is_diagonal());
        }
    }

    #[test]
    fn hp_contractive_embedding() {
        for d in 1..=3usize {
            for p in 1..=4i64 {
                let small = gram(&SpaceSpec::hp(d, rint(p)).unwrap(), 4).unwrap();
                let big = gram(&SpaceSpec::hp(d, rint(p + 1)).unwrap(), 4).unwrap();
                for a in enumerate_upto(d, 4) {
                    assert!(small.scalar(&a, &a).unwrap().re >= big.scalar(&a, &a).unwrap().re);
                }
            }
        }
        let half = gram(&SpaceSpec::hp(2, rat(1, 2)).unwrap(), 2).unwrap();
        // (1/2)_2 = 3/4, α! = 2
        assert_eq!(half.scalar(&mi(&[2, 0]), &mi(&[2, 0])).unwrap(), &cre(rat(8, 3)));
        assert!(SpaceSpec::hp(2, rint(0)).is_err());
    }

    #[test]
    fn lambda_c_matches_closed_form_and_quadrature() {
        let cfg = McConfig::new(1, 0);
        for (lambda, c) in [
            (rint(1), vec![rint(0), rint(0)]),
            (rint(3), vec![rint(1), rint(-1)]),
            (rat(5, 2), vec![rint(1), rint(1), rint(-2)]),
        ] {
            let spec = SpaceSpec::lambda_c(lambda.clone(), c.clone()).unwrap();
            let mu = spec.measure().unwrap();
            let g = gram(&spec, 3).unwrap();
            assert!(g.is_diagonal());
            assert!(g.check_psd().unwrap().psd);
            for a in enumerate_upto(c.len(), 3) {
                let closed = lambda_c_norm_sqr(&lambda, &c, &a);
                assert_eq!(g.scalar(&a, &a).unwrap(), &cre(closed.clone()));
                let f = VectorPolynomial::monomial(&a);
                assert_eq!(dirichlet_inner(&f, &f, &mu, &cfg).unwrap().exact().unwrap(), &cre(closed));
            }
        }
    }

    #[test]
    fn multishift_weight_examples() {
        let da = SpaceSpec::lambda_c(rint(1), vec![rint(0), rint(0)]).unwrap();
        for a in enumerate_upto(2, 5) {
            for j in 0..2 {
                let expect = Rational::new((a[j] + 1).into(), (a.order() + 1).into());
                assert_eq!(multishift_weights(&da, &a, j).unwrap(), expect);
            }
        }
        let spec = SpaceSpec::lambda_c(rint(3), vec![rint(1), rint(-1)]).unwrap();
        assert_eq!(multishift_weights(&spec, &mi(&[0, 0]), 0).unwrap(), rint(2));
        let g = gram(&spec, 5).unwrap();
        for a in enumerate_upto(2, 4) {
            for j in 0..2 {
                let up = a.bump(j);
                let ratio = &g.scalar(&up, &up).unwrap().re / &g.scalar(&a, &a).unwrap().re;
                assert_eq!(multishift_weights(&spec, &a, j).unwrap(), ratio);
            }
        }
        assert!(multishift_weights(&SpaceSpec::hardy(2).unwrap(), &mi(&[0, 0]), 0).is_err());
    }

    #[test]
    fn b_lambda_band() {
        let spec = SpaceSpec::b_lambda(rint(1), vec![cre(rat(1, 4)), czero()]).unwrap();
        let mu = spec.measure().unwrap();
        let g = gram(&spec, 3).unwrap();
        assert!(!g.is_diagonal());
        assert!(g.check_psd().unwrap().psd);
        // the Hardy part is diagonal, so off-diagonal entries equal the ∘-pairing
        assert_eq!(g.scalar(&mi(&[1, 0]), &mi(&[2, 0])).unwrap(), &cre(rat(1, 12)));
        let cfg = McConfig::new(1, 0);
        let b = [cr(rat(1, 3), rat(-1, 5)), cre(rat(1, 6))];
        let spec = SpaceSpec::b_lambda(rint(2), b.to_vec()).unwrap();
        let mu2 = spec.measure().unwrap();
        let g = gram(&spec, 3).unwrap();
        for (m, g) in [(&mu, gram(&SpaceSpec::b_lambda(rint(1), vec![cre(rat(1, 4)), czero()]).unwrap(), 3).unwrap()), (&mu2, g)] {
            for a in enumerate_upto(2, 3) {
                for bb in enumerate_upto(2, 3) {
                    let v = dirichlet_inner(&VectorPolynomial::monomial(&a), &VectorPolynomial::monomial(&bb), m, &cfg).unwrap();
                    assert_eq!(v.exact().unwrap(), g.scalar(&a, &bb).unwrap());
                }
            }
        }
        // band formula b_l |α| (α+ε_l)! (d−1)!/(|α|+d)!
        let g = gram(&SpaceSpec::b_lambda(rint(2), b.to_vec()).unwrap(), 4).unwrap();
        for a in enumerate_upto(2, 3) {
            for l in 0..2 {
                let up = a.bump(l);
                let coeff = Rational::new(
                    BigInt::from(a.order()) * up.factorial() * factorial(1),
                    factorial(a.order() + 2),
                );
                assert_eq!(g.scalar(&a, &up).unwrap(), &b[l].scale(coeff));
            }
        }
    }

    #[test]
    fn one_dimensional_examples() {
        let sigma = Measure::surface(1).unwrap();
        let two = Measure::scaled_surface(1, rint(2)).unwrap();
        let zero = Measure::scaled_surface(1, rint(0)).unwrap();
        let dirac = Measure::dirac(vec![cone()]).unwrap();
        for (mu, slope) in [(&sigma, 1), (&two, 2), (&zero, 0), (&dirac, 1)] {
            let g = one_d_dirichlet(mu, 5).unwrap();
            for k in 0..=5u32 {
                let a = mi(&[k]);
                assert_eq!(g.scalar(&a, &a).unwrap(), &cre(rint(1 + slope * k as i64)));
            }
        }
        // the local Dirichlet space is not diagonal
        assert!(!one_d_dirichlet(&dirac, 3).unwrap().is_diagonal());
        assert!(one_d_dirichlet(&Measure::surface(2).unwrap(), 2).is_err());
    }

    #[test]
    fn space_json() {
        let s: SpaceInput = serde_json::from_str(r#"{"type":"lambda_c","d":2,"lambda":"3","c":["1","-1"]}"#).unwrap();
        assert_eq!(s.build().unwrap(), SpaceSpec::lambda_c(rint(3), vec![rint(1), rint(-1)]).unwrap());
        let s: SpaceInput = serde_json::from_str(r#"{"type":"hp","d":2,"p":"1/2"}"#).unwrap();
        assert_eq!(s.build().unwrap().dim(), 2);
        let s: SpaceInput = serde_json::from_str(r#"{"type":"lambda_c","d":2,"lambda":"1","c":["1","0"]}"#).unwrap();
        assert!(s.build().is_err());
    }
}
