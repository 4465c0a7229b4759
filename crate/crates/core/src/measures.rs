//! Boundary measures on `∂B^d`: the normalized surface measure, surface
//! measures with polynomial densities, and finite atomic measures with scalar
//! or positive-matrix weights.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::HermitianPolynomial;
use crate::linalg::{psd_exact, CMatrix};
use crate::multiindex::MultiIndex;
use crate::poisson::{monte_carlo, BallPoint, KernelKind, McConfig, McEstimate};
use crate::scalar::{
    c_to_f64, cone, cr, cre, fmt_rational, norm_sqr, ComplexInput, ComplexRational, Exact,
    ExactComplex, Rational,
};

/// Weight carried by one atom.
#[derive(Clone, Debug, PartialEq)]
pub enum AtomWeight {
    Scalar(Rational),
    Matrix(CMatrix),
}

impl AtomWeight {
    pub fn block_size(&self) -> usize {
        match self {
            AtomWeight::Scalar(_) => 1,
            AtomWeight::Matrix(m) => m.rows(),
        }
    }

    /// The weight as an `r × r` matrix.
    pub fn as_matrix(&self) -> CMatrix {
        match self {
            AtomWeight::Scalar(w) => CMatrix::from_fn(1, 1, |_, _| cre(w.clone())),
            AtomWeight::Matrix(m) => m.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    point: Vec<ComplexRational>,
    weight: AtomWeight,
}

impl Atom {
    /// An atom at an exact point of the unit sphere.
    pub fn new(point: Vec<ComplexRational>, weight: AtomWeight) -> Result<Self> {
        if point.is_empty() {
            return Err(Error::invalid("atom point must have dimension d >= 1"));
        }
        let n2: Rational = point.iter().map(norm_sqr).sum();
        if !n2.is_one() {
            return Err(Error::Domain(format!(
                "atom point must satisfy ‖ζ‖² = 1 exactly, got {}",
                fmt_rational(&n2)
            )));
        }
        match &weight {
            AtomWeight::Scalar(w) => {
                if !w.is_positive() {
                    return Err(Error::invalid("scalar atom weights must be positive"));
                }
            }
            AtomWeight::Matrix(m) => {
                if !m.is_square() || m.rows() == 0 {
                    return Err(Error::invalid("matrix atom weights must be square and non-empty"));
                }
                if !m.is_hermitian() || !psd_exact(m)?.psd {
                    return Err(Error::NotPsd("matrix atom weight".into()));
                }
            }
        }
        Ok(Atom { point, weight })
    }

    pub fn point(&self) -> &[ComplexRational] {
        &self.point
    }

    pub fn point_f64(&self) -> Vec<Complex64> {
        self.point.iter().map(c_to_f64).collect()
    }

    pub fn weight(&self) -> &AtomWeight {
        &self.weight
    }

    /// `ζ^α ζ̄^β` at this atom.
    pub fn monomial(&self, alpha: &MultiIndex, beta: &MultiIndex) -> ComplexRational {
        let mut t = cone();
        for j in 0..self.point.len() {
            for _ in 0..alpha[j] {
                t *= &self.point[j];
            }
            let c = self.point[j].conj();
            for _ in 0..beta[j] {
                t *= &c;
            }
        }
        t
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Measure {
    NormalizedSurface { d: usize },
    PolynomialWeightSurface { weight: HermitianPolynomial },
    Atomic { d: usize, block: usize, atoms: Vec<Atom> },
}

/// `P[μ](z)`: a float scalar (with a standard error for Monte Carlo values)
/// or a Hermitian matrix for matrix-valued measures.
#[derive(Clone, Debug, PartialEq)]
pub enum PoissonValue {
    Scalar { value: f64, std_error: f64 },
    Matrix(DMatrix<Complex64>),
}

/// Total mass: a rational, or a PSD matrix for matrix-valued measures.
#[derive(Clone, Debug, PartialEq)]
pub enum Mass {
    Scalar(Rational),
    Matrix(CMatrix),
}

impl Measure {
    pub fn surface(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        Ok(Measure::NormalizedSurface { d })
    }

    /// `s·σ` for a rational `s ≥ 0`.
    pub fn scaled_surface(d: usize, s: Rational) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        if s.is_negative() {
            return Err(Error::invalid("surface measure scale must be non-negative"));
        }
        Ok(Measure::PolynomialWeightSurface {
            weight: HermitianPolynomial::constant(d, cre(s)),
        })
    }

    /// A surface measure with density `weight`, which must be real-valued and
    /// non-negative on the sphere. Non-negativity is spot-checked on a fixed
    /// set of sphere points.
    pub fn polynomial_weight(weight: HermitianPolynomial) -> Result<Self> {
        if !weight.is_real() {
            return Err(Error::invalid("polynomial weight must be real-valued"));
        }
        let f = weight.compile();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0x5eed);
        for _ in 0..4096 {
            let p = random_sphere_f64(&mut rng, weight.dim());
            if f.eval(&p).re < -1e-12 {
                return Err(Error::invalid("polynomial weight is negative somewhere on the sphere"));
            }
        }
        Ok(Measure::PolynomialWeightSurface { weight })
    }

    /// Scalar atomic measure `Σ w_i δ_{ζ_i}`.
    pub fn atomic(atoms: Vec<Atom>) -> Result<Self> {
        let first = atoms
            .first()
            .ok_or_else(|| Error::invalid("atomic measure needs at least one atom"))?;
        let d = first.point.len();
        let block = first.weight.block_size();
        for a in &atoms {
            if a.point.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: a.point.len(),
                });
            }
            let kind_ok = matches!(
                (&first.weight, &a.weight),
                (AtomWeight::Scalar(_), AtomWeight::Scalar(_)) | (AtomWeight::Matrix(_), AtomWeight::Matrix(_))
            );
            if !kind_ok || a.weight.block_size() != block {
                return Err(Error::invalid("all atom weights must share the same block size"));
            }
        }
        Ok(Measure::Atomic { d, block, atoms })
    }

    /// Unit point mass at `ζ`.
    pub fn dirac(point: Vec<ComplexRational>) -> Result<Self> {
        Self::atomic(vec![Atom::new(point, AtomWeight::Scalar(Rational::one()))?])
    }

    pub fn dim(&self) -> usize {
        match self {
            Measure::NormalizedSurface { d } | Measure::Atomic { d, .. } => *d,
            Measure::PolynomialWeightSurface { weight } => weight.dim(),
        }
    }

    /// `r` for `B(C^r)`-valued measures; 1 for scalar ones.
    pub fn block_size(&self) -> usize {
        match self {
            Measure::Atomic { block, atoms, .. } => {
                if matches!(atoms[0].weight, AtomWeight::Matrix(_)) {
                    *block
                } else {
                    1
                }
            }
            _ => 1,
        }
    }

    pub fn is_matrix_valued(&self) -> bool {
        matches!(self, Measure::Atomic { atoms, .. } if matches!(atoms[0].weight, AtomWeight::Matrix(_)))
    }

    /// The density against `σ` when there is one (`σ` itself has density 1).
    pub fn density(&self) -> Option<HermitianPolynomial> {
        match self {
            Measure::NormalizedSurface { d } => Some(HermitianPolynomial::constant(*d, cone())),
            Measure::PolynomialWeightSurface { weight } => Some(weight.clone()),
            Measure::Atomic { .. } => None,
        }
    }

    /// The density, if it is harmonic; `P[μ]` then equals the density itself.
    pub fn harmonic_density(&self) -> Option<HermitianPolynomial> {
        self.density().filter(|w| w.is_harmonic())
    }

    /// The density depends only on `(|z_1|², …, |z_d|²)`. Atomic measures
    /// are never torus-invariant.
    pub fn is_torus_invariant(&self) -> bool {
        self.density().is_some_and(|w| w.is_torus_invariant())
    }

    pub fn atoms(&self) -> &[Atom] {
        match self {
            Measure::Atomic { atoms, .. } => atoms,
            _ => &[],
        }
    }

    /// `μ(∂B^d)`, exactly.
    pub fn total_mass(&self) -> Mass {
        match self {
            Measure::Atomic { .. } if self.is_matrix_valued() => {
                let r = self.block_size();
                let mut m = CMatrix::zeros(r, r);
                for a in self.atoms() {
                    m = m.add(&a.weight.as_matrix());
                }
                Mass::Matrix(m)
            }
            Measure::Atomic { atoms, .. } => Mass::Scalar(
                atoms
                    .iter()
                    .map(|a| match &a.weight {
                        AtomWeight::Scalar(w) => w.clone(),
                        AtomWeight::Matrix(_) => unreachable!(),
                    })
                    .sum(),
            ),
            _ => Mass::Scalar(self.density().unwrap().sphere_integral().re),
        }
    }

    /// Total mass of a scalar measure.
    pub fn scalar_mass(&self) -> Result<Rational> {
        match self.total_mass() {
            Mass::Scalar(m) => Ok(m),
            Mass::Matrix(_) => Err(Error::invalid("measure is matrix-valued")),
        }
    }

    /// `∫ ζ^α ζ̄^β dμ` as an `r × r` block.
    pub fn moment(&self, alpha: &MultiIndex, beta: &MultiIndex) -> CMatrix {
        match self {
            Measure::Atomic { .. } => {
                let r = self.block_size();
                let mut m = CMatrix::zeros(r, r);
                for a in self.atoms() {
                    let v = a.monomial(alpha, beta);
                    if !v.is_zero() {
                        m = m.add(&a.weight.as_matrix().scale(&v));
                    }
                }
                m
            }
            _ => {
                let w = self.density().unwrap();
                let mono = HermitianPolynomial::monomial(alpha.clone(), beta.clone(), cone())
                    .expect("equal dimensions");
                let v = mono.mul(&w).expect("equal dimensions").sphere_integral();
                CMatrix::from_fn(1, 1, |_, _| v.clone())
            }
        }
    }

    /// `P[μ](z)`. Exact finite sums for atoms, the density itself for
    /// harmonic densities, and a Monte Carlo estimate of `∫ P(z,·) w dσ`
    /// otherwise.
    pub fn poisson_integral(&self, z: &BallPoint, cfg: &McConfig) -> Result<PoissonValue> {
        if z.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: z.dim(),
            });
        }
        if z.norm() >= 1.0 {
            return Err(Error::Domain("z must lie in the open ball".into()));
        }
        match self {
            Measure::Atomic { .. } => {
                let r = self.block_size();
                let mut acc = DMatrix::<Complex64>::zeros(r, r);
                for a in self.atoms() {
                    let zeta = a.point_f64();
                    let p = KernelKind::Euclidean
                        .eval(z.coords(), &zeta)
                        .ok_or_else(|| Error::Domain("z is at an atom".into()))?;
                    acc += a.weight.as_matrix().to_f64() * Complex64::new(p, 0.0);
                }
                if self.is_matrix_valued() {
                    Ok(PoissonValue::Matrix(acc))
                } else {
                    Ok(PoissonValue::Scalar {
                        value: acc[(0, 0)].re,
                        std_error: 0.0,
                    })
                }
            }
            _ => {
                let w = self.density().unwrap();
                if w.is_harmonic() {
                    return Ok(PoissonValue::Scalar {
                        value: w.compile().eval(z.coords()).re,
                        std_error: 0.0,
                    });
                }
                let f = w.compile();
                let zc = z.coords().to_vec();
                let est: McEstimate = monte_carlo(self.dim(), 1, cfg, |s, out| {
                    let zeta = s.sphere();
                    match KernelKind::Euclidean.eval(&zc, &zeta) {
                        Some(p) => {
                            out[0] = p * f.eval(&zeta).re;
                            true
                        }
                        None => false,
                    }
                })?
                .component(0);
                Ok(PoissonValue::Scalar {
                    value: est.estimate,
                    std_error: est.std_error,
                })
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Measure::NormalizedSurface { d } => format!("surface(d={d})"),
            Measure::PolynomialWeightSurface { weight } => {
                format!("polynomial_weight(d={}, terms={})", weight.dim(), weight.len())
            }
            Measure::Atomic { d, atoms, .. } => format!("atomic(d={d}, atoms={})", atoms.len()),
        }
    }
}

/// `λ + Σ c_j |z_j|²` with `λ > max|c_j|` and `Σ c_j = 0`.
pub fn lambda_c_weight(lambda: &Rational, c: &[Rational]) -> Result<HermitianPolynomial> {
    if c.is_empty() {
        return Err(Error::invalid("c must have d >= 1 entries"));
    }
    let sum: Rational = c.iter().cloned().sum();
    if !sum.is_zero() {
        return Err(Error::precondition(format!(
            "Σ c_j = 0 fails (Σ c_j = {})",
            fmt_rational(&sum)
        )));
    }
    let max = c.iter().map(|x| x.abs()).max().unwrap();
    if lambda <= &max {
        return Err(Error::precondition(format!(
            "λ > max |c_j| fails ({} <= {})",
            fmt_rational(lambda),
            fmt_rational(&max)
        )));
    }
    let d = c.len();
    let mut w = HermitianPolynomial::constant(d, cre(lambda.clone()));
    for (j, cj) in c.iter().enumerate() {
        let e = MultiIndex::unit(d, j);
        w.add_term(e.clone(), e, cre(cj.clone()));
    }
    Ok(w)
}

pub fn make_lambda_c(lambda: &Rational, c: &[Rational]) -> Result<Measure> {
    Ok(Measure::PolynomialWeightSurface {
        weight: lambda_c_weight(lambda, c)?,
    })
}

/// `λ + Σ (b_j z_j + b̄_j z̄_j)` with `λ² > 2 Σ |b_j|²`.
pub fn b_lambda_weight(lambda: &Rational, b: &[ComplexRational]) -> Result<HermitianPolynomial> {
    if b.is_empty() {
        return Err(Error::invalid("b must have d >= 1 entries"));
    }
    let s: Rational = b.iter().map(norm_sqr).sum();
    let two_s = s * Rational::from_integer(2.into());
    if lambda * lambda <= two_s {
        return Err(Error::precondition(format!(
            "λ² > 2Σ|b_j|² fails ({} <= {})",
            fmt_rational(&(lambda * lambda)),
            fmt_rational(&two_s)
        )));
    }
    if !lambda.is_positive() {
        return Err(Error::precondition("λ must be positive".to_string()));
    }
    let d = b.len();
    let mut w = HermitianPolynomial::constant(d, cre(lambda.clone()));
    let zero = MultiIndex::zero(d);
    for (j, bj) in b.iter().enumerate() {
        let e = MultiIndex::unit(d, j);
        w.add_term(e.clone(), zero.clone(), bj.clone());
        w.add_term(zero.clone(), e, bj.conj());
    }
    Ok(w)
}

pub fn make_b_lambda(lambda: &Rational, b: &[ComplexRational]) -> Result<Measure> {
    Ok(Measure::PolynomialWeightSurface {
        weight: b_lambda_weight(lambda, b)?,
    })
}

pub fn poisson_integral(mu: &Measure, z: &BallPoint, cfg: &McConfig) -> Result<PoissonValue> {
    mu.poisson_integral(z, cfg)
}

pub fn total_mass(mu: &Measure) -> Mass {
    mu.total_mass()
}

/// Exact point of `∂B^d` from `2d − 1` real rational parameters by inverse
/// stereographic projection from the pole `(0, …, 0, 1)` of `S^{2d−1} ⊂ R^{2d}`.
pub fn stereographic_point(d: usize, t: &[Rational]) -> Result<Vec<ComplexRational>> {
    if d == 0 || t.len() != 2 * d - 1 {
        return Err(Error::invalid("need 2d - 1 parameters"));
    }
    let s: Rational = t.iter().map(|x| x * x).sum();
    let den = &s + Rational::one();
    let mut x: Vec<Rational> = t
        .iter()
        .map(|ti| Rational::from_integer(2.into()) * ti / &den)
        .collect();
    x.push((&s - Rational::one()) / &den);
    Ok((0..d).map(|j| cr(x[2 * j].clone(), x[2 * j + 1].clone())).collect())
}

/// A random exact sphere point with small-height rational coordinates.
pub fn random_sphere_point<R: Rng>(rng: &mut R, d: usize) -> Vec<ComplexRational> {
    let t: Vec<Rational> = (0..2 * d - 1)
        .map(|_| Rational::new(rng.random_range(-12i64..=12).into(), rng.random_range(1i64..=7).into()))
        .collect();
    stereographic_point(d, &t).expect("parameter count matches")
}

fn random_sphere_f64<R: Rng>(rng: &mut R, d: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d)
        .map(|_| {
            Complex64::new(
                rng.sample(rand_distr::StandardNormal),
                rng.sample(rand_distr::StandardNormal),
            )
        })
        .collect();
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / n).collect()
}

// ---- JSON descriptors ----

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightInput {
    Scalar(Exact),
    Matrix(Vec<Vec<ComplexInput>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomSpec {
    pub point: Vec<ComplexInput>,
    pub weight: WeightInput,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermSpec {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub re: Exact,
    #[serde(default = "zero_exact")]
    pub im: Exact,
}

fn zero_exact() -> Exact {
    Exact(Rational::zero())
}

/// Wire form of a measure.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MeasureSpec {
    Surface {
        d: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<Exact>,
    },
    LambdaC {
        d: usize,
        lambda: Exact,
        c: Vec<Exact>,
    },
    BLambda {
        d: usize,
        lambda: Exact,
        b: Vec<ComplexInput>,
    },
    Polynomial {
        d: usize,
        terms: Vec<TermSpec>,
    },
    Atomic {
        d: usize,
        atoms: Vec<AtomSpec>,
    },
}

impl MeasureSpec {
    pub fn dim(&self) -> usize {
        match self {
            MeasureSpec::Surface { d, .. }
            | MeasureSpec::LambdaC { d, .. }
            | MeasureSpec::BLambda { d, .. }
            | MeasureSpec::Polynomial { d, .. }
            | MeasureSpec::Atomic { d, .. } => *d,
        }
    }

    pub fn build(&self) -> Result<Measure> {
        let d = self.dim();
        if d == 0 {
            return Err(Error::invalid("d must be positive"));
        }
        let check_len = |n: usize| {
            if n != d {
                Err(Error::DimensionMismatch { expected: d, found: n })
            } else {
                Ok(())
            }
        };
        match self {
            MeasureSpec::Surface { scale: None, .. } => Measure::surface(d),
            MeasureSpec::Surface { scale: Some(s), .. } => Measure::scaled_surface(d, s.0.clone()),
            MeasureSpec::LambdaC { lambda, c, .. } => {
                check_len(c.len())?;
                let c: Vec<Rational> = c.iter().map(|x| x.0.clone()).collect();
                make_lambda_c(&lambda.0, &c)
            }
            MeasureSpec::BLambda { lambda, b, .. } => {
                check_len(b.len())?;
                let b: Vec<ComplexRational> = b.iter().map(ComplexInput::value).collect();
                make_b_lambda(&lambda.0, &b)
            }
            MeasureSpec::Polynomial { terms, .. } => {
                let mut w = HermitianPolynomial::zero(d);
                for t in terms {
                    check_len(t.alpha.dim())?;
                    check_len(t.beta.dim())?;
                    w.add_term(t.alpha.clone(), t.beta.clone(), cr(t.re.0.clone(), t.im.0.clone()));
                }
                Measure::polynomial_weight(w)
            }
            MeasureSpec::Atomic { atoms, .. } => {
                let built = atoms
                    .iter()
                    .map(|a| {
                        check_len(a.point.len())?;
                        let point = a.point.iter().map(ComplexInput::value).collect();
                        let weight = match &a.weight {
                            WeightInput::Scalar(w) => AtomWeight::Scalar(w.0.clone()),
                            WeightInput::Matrix(rows) => {
                                let r = rows.len();
                                if rows.iter().any(|row| row.len() != r) {
                                    return Err(Error::invalid("matrix weight must be square"));
                                }
                                AtomWeight::Matrix(CMatrix::from_fn(r, r, |i, j| rows[i][j].value()))
                            }
                        };
                        Atom::new(point, weight)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Measure::atomic(built)
            }
        }
    }
}

impl Measure {
    pub fn from_json(s: &str) -> Result<Self> {
        let spec: MeasureSpec = serde_json::from_str(s)?;
        spec.build()
    }
}

impl From<&Measure> for MeasureSpec {
    fn from(m: &Measure) -> Self {
        match m {
            Measure::NormalizedSurface { d } => MeasureSpec::Surface { d: *d, scale: None },
            Measure::PolynomialWeightSurface { weight } => MeasureSpec::Polynomial {
                d: weight.dim(),
                terms: weight
                    .terms()
                    .map(|(a, b, c)| TermSpec {
                        alpha: a.clone(),
                        beta: b.clone(),
                        re: Exact(c.re.clone()),
                        im: Exact(c.im.clone()),
                    })
                    .collect(),
            },
            Measure::Atomic { d, atoms, .. } => MeasureSpec::Atomic {
                d: *d,
                atoms: atoms
                    .iter()
                    .map(|a| AtomSpec {
                        point: a.point.iter().map(ComplexInput::from_value).collect(),
                        weight: match &a.weight {
                            AtomWeight::Scalar(w) => WeightInput::Scalar(Exact(w.clone())),
                            AtomWeight::Matrix(m) => WeightInput::Matrix(
                                (0..m.rows())
                                    .map(|i| {
                                        (0..m.cols())
                                            .map(|j| ComplexInput::Object(ExactComplex::from(&m[(i, j)])))
                                            .collect()
                                    })
                                    .collect(),
                            ),
                        },
                    })
                    .collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{czero, rat, rint};
    use rand::SeedableRng;

    #[test]
    fn lambda_c_constraints() {
        let m = make_lambda_c(&rint(1), &[rint(0), rint(0)]).unwrap();
        assert_eq!(m.scalar_mass().unwrap(), rint(1));
        assert!(make_lambda_c(&rint(3), &[rint(1), rint(-1)]).is_ok());
        let err = make_lambda_c(&rint(1), &[rint(2), rint(-2)]).unwrap_err();
        assert!(err.to_string().contains("max |c_j|"));
        let err = make_lambda_c(&rint(3), &[rint(1), rint(1)]).unwrap_err();
        assert!(err.to_string().contains("Σ c_j = 0"));
    }

    #[test]
    fn b_lambda_constraints() {
        assert!(make_b_lambda(&rint(1), &[cre(rat(1, 4)), czero()]).is_ok());
        let m = make_b_lambda(&rint(2), &[czero(), czero()]).unwrap();
        assert_eq!(m.density().unwrap(), HermitianPolynomial::constant(2, cre(rint(2))));
        assert!(make_b_lambda(&rint(1), &[cre(rint(1)), czero()]).is_err());
    }

    #[test]
    fn masses() {
        assert_eq!(Measure::surface(3).unwrap().scalar_mass().unwrap(), rint(1));
        let m = make_lambda_c(&rint(3), &[rint(1), rint(-1)]).unwrap();
        assert_eq!(m.scalar_mass().unwrap(), rint(3));
        let p = vec![cre(rint(1)), czero()];
        let q = vec![czero(), cre(rint(1))];
        let a = Measure::atomic(vec![
            Atom::new(p, AtomWeight::Scalar(rat(1, 2))).unwrap(),
            Atom::new(q, AtomWeight::Scalar(rat(1, 3))).unwrap(),
        ])
        .unwrap();
        assert_eq!(a.scalar_mass().unwrap(), rat(5, 6));
    }

    #[test]
    fn atoms_must_be_on_sphere_with_positive_weight() {
        assert!(Atom::new(vec![cre(rat(1, 2))], AtomWeight::Scalar(rint(1))).is_err());
        assert!(Atom::new(vec![cre(rint(1))], AtomWeight::Scalar(rint(0))).is_err());
        let mut bad = CMatrix::identity(2);
        bad[(1, 1)] = cre(rint(-1));
        assert!(Atom::new(vec![cre(rint(1))], AtomWeight::Matrix(bad)).is_err());
    }

    #[test]
    fn stereographic_points_are_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for d in 1..=3 {
            for _ in 0..10 {
                let p = random_sphere_point(&mut rng, d);
                let n: Rational = p.iter().map(norm_sqr).sum();
                assert!(n.is_one());
            }
        }
    }

    #[test]
    fn poisson_integral_paths() {
        let cfg = McConfig::new(1000, 1);
        let z = BallPoint::interior(vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4)]).unwrap();
        match Measure::surface(2).unwrap().poisson_integral(&z, &cfg).unwrap() {
            PoissonValue::Scalar { value, std_error } => {
                assert_eq!(value, 1.0);
                assert_eq!(std_error, 0.0);
            }
            _ => panic!(),
        }
        let m = make_lambda_c(&rint(3), &[rint(1), rint(-1)]).unwrap();
        let expected = 3.0 + 0.1 - 0.2;
        match m.poisson_integral(&z, &cfg).unwrap() {
            PoissonValue::Scalar { value, .. } => assert!((value - expected).abs() < 1e-12),
            _ => panic!(),
        }
        let zero = BallPoint::interior(vec![Complex64::new(0.0, 0.0); 2]).unwrap();
        let a = Measure::dirac(vec![cre(rat(3, 5)), cr(rint(0), rat(4, 5))]).unwrap();
        match a.poisson_integral(&zero, &cfg).unwrap() {
            PoissonValue::Scalar { value, .. } => assert!((value - 1.0).abs() < 1e-15),
            _ => panic!(),
        }
    }

    #[test]
    fn torus_invariance_predicate() {
        assert!(make_lambda_c(&rint(3), &[rint(1), rint(-1)]).unwrap().is_torus_invariant());
        assert!(!make_b_lambda(&rint(1), &[cre(rat(1, 4)), czero()]).unwrap().is_torus_invariant());
        assert!(make_b_lambda(&rint(1), &[czero(), czero()]).unwrap().is_torus_invariant());
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"type":"atomic","d":2,"atoms":[{"point":["3/5",["0","4/5"]],"weight":"1/2"}]}"#;
        let m = Measure::from_json(src).unwrap();
        let back = serde_json::to_string(&MeasureSpec::from(&m)).unwrap();
        assert_eq!(Measure::from_json(&back).unwrap(), m);
        let lc = r#"{"type":"lambda_c","d":2,"lambda":"3","c":["1","-1"]}"#;
        assert!(Measure::from_json(lc).is_ok());
        let bad = r#"{"type":"lambda_c","d":2,"lambda":"1","c":["2","-2"]}"#;
        assert!(Measure::from_json(bad).is_err());
        let bl = r#"{"type":"b_lambda","d":2,"lambda":"1","b":[{"re":"1/4","im":"1/8"},"0"]}"#;
        assert!(Measure::from_json(bl).is_ok());
    }
}
