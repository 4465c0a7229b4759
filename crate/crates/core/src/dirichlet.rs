//! Dirichlet-type inner products on (vector-valued) polynomials and the
//! verifiers for Richter's identity, its radius-`R` form, and its failure for
//! the invariant Poisson kernel.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{gradient_pairing, HermitianPolynomial};
use crate::linalg::CMatrix;
use crate::measures::Measure;
use crate::multiindex::{enumerate_grade, MultiIndex};
use crate::poisson::{kernel_integrals, monte_carlo, Anchor, ComplexEstimate, KernelKind, McConfig};
use crate::scalar::{c_to_f64, czero, fmt_rational, ComplexInput, ComplexRational, Exact, Rational};

/// A polynomial `Σ_α c_α z^α` with coefficients in `C^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorPolynomial {
    dim: usize,
    r: usize,
    coeffs: BTreeMap<MultiIndex, Vec<ComplexRational>>,
}

impl VectorPolynomial {
    pub fn zero(dim: usize, r: usize) -> Self {
        assert!(dim >= 1 && r >= 1, "dimension and value dimension must be positive");
        VectorPolynomial {
            dim,
            r,
            coeffs: BTreeMap::new(),
        }
    }

    /// The scalar monomial `z^α`.
    pub fn monomial(alpha: &MultiIndex) -> Self {
        Self::monomial_vec(alpha, vec![crate::scalar::cone()])
    }

    /// `z^α x` for a fixed vector `x`.
    pub fn monomial_vec(alpha: &MultiIndex, x: Vec<ComplexRational>) -> Self {
        let mut p = Self::zero(alpha.dim(), x.len());
        p.add_term(alpha.clone(), x);
        p
    }

    /// A scalar polynomial from a holomorphic Hermitian polynomial.
    pub fn from_scalar(p: &HermitianPolynomial) -> Result<Self> {
        if !p.is_holomorphic() {
            return Err(Error::invalid("expected a holomorphic polynomial"));
        }
        let mut out = Self::zero(p.dim(), 1);
        for (a, _, c) in p.terms() {
            out.add_term(a.clone(), vec![c.clone()]);
        }
        Ok(out)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, x: Vec<ComplexRational>) {
        assert_eq!(alpha.dim(), self.dim, "index dimension mismatch");
        assert_eq!(x.len(), self.r, "value dimension mismatch");
        let entry = self.coeffs.entry(alpha.clone()).or_insert_with(|| vec![czero(); x.len()]);
        for (e, v) in entry.iter_mut().zip(x) {
            *e += v;
        }
        if entry.iter().all(Zero::is_zero) {
            self.coeffs.remove(&alpha);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value_dim(&self) -> usize {
        self.r
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<ComplexRational>)> {
        self.coeffs.iter()
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    /// The `s`-th coordinate as a holomorphic polynomial.
    pub fn component(&self, s: usize) -> HermitianPolynomial {
        let mut p = HermitianPolynomial::zero(self.dim);
        let zero = MultiIndex::zero(self.dim);
        for (a, x) in &self.coeffs {
            p.add_term(a.clone(), zero.clone(), x[s].clone());
        }
        p
    }

    /// `z^γ f`.
    pub fn shift(&self, gamma: &MultiIndex) -> Self {
        VectorPolynomial {
            dim: self.dim,
            r: self.r,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, x)| (a.plus(gamma), x.clone()))
                .collect(),
        }
    }

    /// `f(0)`.
    pub fn at_zero(&self) -> Vec<ComplexRational> {
        self.coeffs
            .get(&MultiIndex::zero(self.dim))
            .cloned()
            .unwrap_or_else(|| vec![czero(); self.r])
    }

    pub fn eval_exact(&self, z: &[ComplexRational]) -> Vec<ComplexRational> {
        (0..self.r)
            .map(|s| self.component(s).eval_exact(z).expect("dimension checked"))
            .collect()
    }
}

/// Wire form: `{"d": 2, "terms": [{"alpha": [1, 0], "coeff": ["1/2"]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorPolynomialSpec {
    pub d: usize,
    #[serde(default = "one")]
    pub r: usize,
    pub terms: Vec<VectorTermSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorTermSpec {
    pub alpha: MultiIndex,
    pub coeff: Vec<ComplexInput>,
}

fn one() -> usize {
    1
}

impl VectorPolynomialSpec {
    pub fn build(&self) -> Result<VectorPolynomial> {
        if self.d == 0 || self.r == 0 {
            return Err(Error::invalid("d and r must be positive"));
        }
        let mut p = VectorPolynomial::zero(self.d, self.r);
        for t in &self.terms {
            if t.alpha.dim() != self.d {
                return Err(Error::DimensionMismatch {
                    expected: self.d,
                    found: t.alpha.dim(),
                });
            }
            if t.coeff.len() != self.r {
                return Err(Error::DimensionMismatch {
                    expected: self.r,
                    found: t.coeff.len(),
                });
            }
            p.add_term(t.alpha.clone(), t.coeff.iter().map(ComplexInput::value).collect());
        }
        Ok(p)
    }
}

/// An inner-product value: exact, or a Monte Carlo estimate.
#[derive(Clone, Debug, PartialEq)]
pub enum InnerValue {
    Exact(ComplexRational),
    Estimate(ComplexEstimate),
}

impl InnerValue {
    pub fn exact(&self) -> Option<&ComplexRational> {
        match self {
            InnerValue::Exact(v) => Some(v),
            InnerValue::Estimate(_) => None,
        }
    }

    pub fn to_f64(&self) -> Complex64 {
        match self {
            InnerValue::Exact(v) => c_to_f64(v),
            InnerValue::Estimate(e) => e.value,
        }
    }
}

fn check_pair(f: &VectorPolynomial, g: &VectorPolynomial, mu: &Measure) -> Result<()> {
    if f.dim != g.dim || f.dim != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            found: if f.dim != mu.dim() { f.dim } else { g.dim },
        });
    }
    if f.r != g.r {
        return Err(Error::DimensionMismatch {
            expected: f.r,
            found: g.r,
        });
    }
    if mu.is_matrix_valued() && mu.block_size() != f.r {
        return Err(Error::DimensionMismatch {
            expected: mu.block_size(),
            found: f.r,
        });
    }
    Ok(())
}

/// `Σ_j Σ_{s,t} W_{st} ∂_j f_t · conj(∂_j g_s)`; `W = I` when `None`.
fn gradient_density(f: &VectorPolynomial, g: &VectorPolynomial, w: Option<&CMatrix>) -> Result<HermitianPolynomial> {
    let mut out = HermitianPolynomial::zero(f.dim);
    for s in 0..f.r {
        for t in 0..f.r {
            let coeff = match w {
                Some(m) => m[(s, t)].clone(),
                None if s == t => crate::scalar::cone(),
                None => continue,
            };
            if coeff.is_zero() {
                continue;
            }
            let gp = gradient_pairing(&f.component(t), &g.component(s))?;
            out = out.add(&gp.scale(&coeff))?;
        }
    }
    Ok(out)
}

/// `Σ_{s,t} W_{st} f_t · conj(g_s)` as a Hermitian polynomial.
fn pointwise_pairing(f: &VectorPolynomial, g: &VectorPolynomial, w: Option<&CMatrix>) -> Result<HermitianPolynomial> {
    let mut out = HermitianPolynomial::zero(f.dim);
    for s in 0..f.r {
        for t in 0..f.r {
            let coeff = match w {
                Some(m) => m[(s, t)].clone(),
                None if s == t => crate::scalar::cone(),
                None => continue,
            };
            if coeff.is_zero() {
                continue;
            }
            let p = f.component(t).mul(&g.component(s).conj())?;
            out = out.add(&p.scale(&coeff))?;
        }
    }
    Ok(out)
}

/// `⟨f, g⟩_{H²(B^d)} = ∫ ⟨f, g⟩ dσ`.
pub fn hardy_inner(f: &VectorPolynomial, g: &VectorPolynomial) -> Result<ComplexRational> {
    if f.dim != g.dim || f.r != g.r {
        return Err(Error::invalid("hardy_inner: shape mismatch"));
    }
    Ok(pointwise_pairing(f, g, None)?.sphere_integral())
}

/// `∫ ⟨dF f, g⟩` over the sphere, exactly.
pub fn boundary_pairing(f: &VectorPolynomial, g: &VectorPolynomial, mu: &Measure) -> Result<ComplexRational> {
    check_pair(f, g, mu)?;
    match mu.density() {
        Some(w) => Ok(pointwise_pairing(f, g, None)?.mul(&w)?.sphere_integral()),
        None => {
            let mut total = czero();
            for a in mu.atoms() {
                let m = a.weight().as_matrix();
                let fv = f.eval_exact(a.point());
                let gv = g.eval_exact(a.point());
                for s in 0..f.r {
                    for t in 0..f.r {
                        if mu.is_matrix_valued() || s == t {
                            let wst = if mu.is_matrix_valued() { m[(s, t)].clone() } else { m[(0, 0)].clone() };
                            total += wst * &fv[t] * gv[s].conj();
                        }
                    }
                }
            }
            Ok(total)
        }
    }
}

fn atom_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// `∫_{B^d} ⟨P[F] ∇f, ∇g⟩ dV` for each pair, summed over `j`. Exact for
/// harmonic densities, Monte Carlo otherwise.
fn gradient_integrals(
    pairs: &[(&VectorPolynomial, &VectorPolynomial)],
    mu: &Measure,
    kind: KernelKind,
    cfg: &McConfig,
) -> Result<Vec<InnerValue>> {
    if let Some(w) = mu.density() {
        let exact_ok = match kind {
            KernelKind::Euclidean => w.is_harmonic(),
            // P_ι[c·σ] = c
            KernelKind::Invariant => w.total_degree() == 0,
        };
        let polys = pairs
            .iter()
            .map(|(f, g)| gradient_density(f, g, None))
            .collect::<Result<Vec<_>>>()?;
        if exact_ok {
            return polys
                .iter()
                .map(|p| Ok(InnerValue::Exact(p.mul(&w)?.ball_integral())))
                .collect();
        }
        if kind == KernelKind::Invariant {
            return Err(Error::precondition(
                "invariant kernel integrals are only supported for atomic or constant-density measures",
            ));
        }
        let (est, _, _) = kernel_integrals(kind, &Anchor::Density(w), &polys, cfg)?;
        return Ok(est.into_iter().map(InnerValue::Estimate).collect());
    }
    let mut totals = vec![ComplexEstimate::exact(Complex64::new(0.0, 0.0)); pairs.len()];
    for (i, a) in mu.atoms().iter().enumerate() {
        let m = a.weight().as_matrix();
        let polys = pairs
            .iter()
            .map(|(f, g)| {
                if mu.is_matrix_valued() {
                    gradient_density(f, g, Some(&m))
                } else {
                    Ok(gradient_density(f, g, None)?.scale(&m[(0, 0)]))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut c = *cfg;
        c.seed = atom_seed(cfg.seed, i);
        let (est, _, _) = kernel_integrals(kind, &Anchor::Point(a.point_f64()), &polys, &c)?;
        for (t, e) in totals.iter_mut().zip(est) {
            *t = t.add(&e);
        }
    }
    Ok(totals.into_iter().map(InnerValue::Estimate).collect())
}

fn combine(a: &InnerValue, b: &ComplexRational, scale_a: &Rational) -> InnerValue {
    match a {
        InnerValue::Exact(v) => InnerValue::Exact(v.scale(scale_a.clone()) + b),
        InnerValue::Estimate(e) => {
            let s = crate::scalar::to_f64(scale_a);
            let mut out = e.scale(s);
            out.value += c_to_f64(b);
            InnerValue::Estimate(out)
        }
    }
}

/// `⟨f, g⟩_{D(F)} = ⟨f, g⟩_{H²} + (1/d) ∫ Σ_j ⟨P[F] ∂_j f, ∂_j g⟩ dV`.
pub fn dirichlet_inner(f: &VectorPolynomial, g: &VectorPolynomial, mu: &Measure, cfg: &McConfig) -> Result<InnerValue> {
    check_pair(f, g, mu)?;
    let hardy = hardy_inner(f, g)?;
    let grad = gradient_integrals(&[(f, g)], mu, KernelKind::Euclidean, cfg)?.remove(0);
    Ok(combine(&grad, &hardy, &Rational::new(1.into(), (f.dim as i64).into())))
}

/// `⟨f, g⟩_∘ = f(0)·conj(g(0)) + (1/d) ∫ ⟨∇f, ∇g⟩ P[μ] dV` (scalar measures).
pub fn circ_inner(f: &VectorPolynomial, g: &VectorPolynomial, mu: &Measure, cfg: &McConfig) -> Result<InnerValue> {
    check_pair(f, g, mu)?;
    if mu.is_matrix_valued() || f.r != 1 {
        return Err(Error::invalid("circ_inner is defined for scalar data"));
    }
    let at0 = &f.at_zero()[0] * g.at_zero()[0].conj();
    let grad = gradient_integrals(&[(f, g)], mu, KernelKind::Euclidean, cfg)?.remove(0);
    Ok(combine(&grad, &at0, &Rational::new(1.into(), (f.dim as i64).into())))
}

/// Exact-or-estimated complex value on the wire.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ReportValue {
    Exact { re: Exact, im: Exact },
    Estimate { re: f64, im: f64, se_re: f64, se_im: f64 },
}

impl From<&InnerValue> for ReportValue {
    fn from(v: &InnerValue) -> Self {
        match v {
            InnerValue::Exact(z) => ReportValue::Exact {
                re: Exact(z.re.clone()),
                im: Exact(z.im.clone()),
            },
            InnerValue::Estimate(e) => ReportValue::Estimate {
                re: e.value.re,
                im: e.value.im,
                se_re: e.se_re,
                se_im: e.se_im,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RichterReport {
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<String>,
    pub measure: String,
    pub kernel: KernelKind,
    pub mode: Mode,
    pub lhs: ReportValue,
    pub rhs: ReportValue,
    pub residual: ReportValue,
    /// Largest `|part|/se` of the residual; 0 on the exact path.
    pub z_score: f64,
    /// Exact path: residual is exactly zero. Monte Carlo path: residual
    /// within three standard errors.
    pub pass: bool,
    #[serde(skip)]
    pub lhs_value: InnerValue,
    #[serde(skip)]
    pub rhs_value: InnerValue,
    #[serde(skip)]
    pub residual_value: InnerValue,
}

impl RichterReport {
    fn new(
        d: usize,
        k: Option<u32>,
        radius: Option<&Rational>,
        mu: &Measure,
        kernel: KernelKind,
        lhs: InnerValue,
        rhs: InnerValue,
        residual: InnerValue,
    ) -> Self {
        let (mode, z_score, pass) = match &residual {
            InnerValue::Exact(r) => (Mode::Exact, 0.0, r.is_zero()),
            InnerValue::Estimate(e) => {
                let scale = lhs.to_f64().norm().max(rhs.to_f64().norm());
                (Mode::MonteCarlo, e.z_score(), e.within(3.0, 1e-12 * (1.0 + scale)))
            }
        };
        RichterReport {
            d,
            k,
            radius: radius.map(fmt_rational),
            measure: mu.describe(),
            kernel,
            mode,
            lhs: (&lhs).into(),
            rhs: (&rhs).into(),
            residual: (&residual).into(),
            z_score,
            pass,
            lhs_value: lhs,
            rhs_value: rhs,
            residual_value: residual,
        }
    }

    /// The residual exceeds ten standard errors (Monte Carlo) or is a
    /// nonzero exact value.
    pub fn falsified(&self) -> bool {
        match &self.residual_value {
            InnerValue::Exact(r) => !r.is_zero(),
            InnerValue::Estimate(e) => e.z_score() > 10.0,
        }
    }
}

/// One instance of Richter's identity: polynomials `p`, `q` and order `k`.
#[derive(Clone, Debug)]
pub struct RichterCase {
    pub p: VectorPolynomial,
    pub q: VectorPolynomial,
    pub k: u32,
}

/// Checks `Σ_{|γ|=k} |γ|!/γ! ∫⟨∇z^γp, ∇z^γq⟩P[μ]dV = ∫⟨∇p,∇q⟩P[μ]dV + kd∫⟨p,q⟩dμ`.
pub fn verify_richter(p: &VectorPolynomial, q: &VectorPolynomial, mu: &Measure, k: u32, cfg: &McConfig) -> Result<RichterReport> {
    let case = RichterCase {
        p: p.clone(),
        q: q.clone(),
        k,
    };
    Ok(verify_richter_batch(&[case], mu, KernelKind::Euclidean, cfg)?.remove(0))
}

/// Batched form of [`verify_richter`]: Monte Carlo cases share one sampling
/// run per atom.
pub fn verify_richter_batch(cases: &[RichterCase], mu: &Measure, kind: KernelKind, cfg: &McConfig) -> Result<Vec<RichterReport>> {
    let d = mu.dim();
    let mut lifted = Vec::with_capacity(cases.len());
    for c in cases {
        check_pair(&c.p, &c.q, mu)?;
        let grade = enumerate_grade(d, c.k);
        let shifted: Vec<(VectorPolynomial, VectorPolynomial, Rational)> = grade
            .iter()
            .map(|g| (c.p.shift(g), c.q.shift(g), Rational::from_integer(g.multinomial_weight())))
            .collect();
        lifted.push(shifted);
    }
    // For each case: lhs density, rhs density, and their difference.
    let mut polys_by_weight: Vec<Box<dyn Fn(Option<&CMatrix>) -> Result<[HermitianPolynomial; 3]>>> = Vec::new();
    for (c, shifted) in cases.iter().zip(&lifted) {
        let c = c.clone();
        let shifted = shifted.clone();
        polys_by_weight.push(Box::new(move |w| {
            let mut lhs = HermitianPolynomial::zero(c.p.dim());
            for (sp, sq, mult) in &shifted {
                lhs = lhs.add(&gradient_density(sp, sq, w)?.scale_real(mult))?;
            }
            let rhs = gradient_density(&c.p, &c.q, w)?;
            let diff = lhs.sub(&rhs)?;
            Ok([lhs, rhs, diff])
        }));
    }
    let boundary: Vec<ComplexRational> = cases
        .iter()
        .map(|c| boundary_pairing(&c.p, &c.q, mu).map(|b| b.scale(Rational::from_integer((c.k as i64 * d as i64).into()))))
        .collect::<Result<_>>()?;

    let values: Vec<[InnerValue; 3]> = if let Some(w) = mu.density() {
        let exact_ok = match kind {
            KernelKind::Euclidean => w.is_harmonic(),
            KernelKind::Invariant => w.total_degree() == 0,
        };
        let triples = polys_by_weight.iter().map(|f| f(None)).collect::<Result<Vec<_>>>()?;
        if exact_ok {
            triples
                .iter()
                .map(|t| {
                    Ok([
                        InnerValue::Exact(t[0].mul(&w)?.ball_integral()),
                        InnerValue::Exact(t[1].mul(&w)?.ball_integral()),
                        InnerValue::Exact(t[2].mul(&w)?.ball_integral()),
                    ])
                })
                .collect::<Result<_>>()?
        } else if kind == KernelKind::Euclidean {
            let flat: Vec<HermitianPolynomial> = triples.into_iter().flatten().collect();
            let (est, _, _) = kernel_integrals(kind, &Anchor::Density(w), &flat, cfg)?;
            est.chunks(3)
                .map(|c| [InnerValue::Estimate(c[0]), InnerValue::Estimate(c[1]), InnerValue::Estimate(c[2])])
                .collect()
        } else {
            return Err(Error::precondition(
                "invariant kernel integrals are only supported for atomic or constant-density measures",
            ));
        }
    } else {
        let zero = ComplexEstimate::exact(Complex64::new(0.0, 0.0));
        let mut totals = vec![[zero; 3]; cases.len()];
        for (i, a) in mu.atoms().iter().enumerate() {
            let m = a.weight().as_matrix();
            let mut flat = Vec::with_capacity(3 * cases.len());
            for f in &polys_by_weight {
                let t = if mu.is_matrix_valued() {
                    f(Some(&m))?
                } else {
                    f(None)?.map(|p| p.scale(&m[(0, 0)]))
                };
                flat.extend(t);
            }
            let mut c = *cfg;
            c.seed = atom_seed(cfg.seed, i);
            let (est, _, _) = kernel_integrals(kind, &Anchor::Point(a.point_f64()), &flat, &c)?;
            for (t, e) in totals.iter_mut().zip(est.chunks(3)) {
                for s in 0..3 {
                    t[s] = t[s].add(&e[s]);
                }
            }
        }
        totals
            .into_iter()
            .map(|t| t.map(InnerValue::Estimate))
            .collect()
    };

    Ok(cases
        .iter()
        .zip(values)
        .zip(boundary)
        .map(|((c, [lhs, rhs_grad, diff]), b)| {
            let one = Rational::from_integer(1.into());
            let rhs = combine(&rhs_grad, &b, &one);
            let residual = combine(&diff, &(-b), &one);
            RichterReport::new(d, Some(c.k), None, mu, kind, lhs, rhs, residual)
        })
        .collect())
}

/// Richter's identity with `P_ι` in place of `P`; expected to fail for
/// atomic measures when `d ≥ 2`.
pub fn falsify_invariant_kernel(cases: &[RichterCase], mu: &Measure, cfg: &McConfig) -> Result<Vec<RichterReport>> {
    if mu.dim() < 2 {
        return Err(Error::invalid("the two kernels coincide for d = 1"));
    }
    match mu {
        Measure::Atomic { .. } | Measure::NormalizedSurface { .. } => {}
        Measure::PolynomialWeightSurface { weight } if weight.total_degree() == 0 => {}
        _ => {
            return Err(Error::precondition(
                "invariant-kernel check needs an atomic measure or a multiple of σ",
            ))
        }
    }
    verify_richter_batch(cases, mu, KernelKind::Invariant, cfg)
}

/// Both sides of the radius-`R` identity
/// `Σ_j ∫_{RB}⟨∇z_jf,∇z_jg⟩P[μ]dV − R²∫_{RB}⟨∇f,∇g⟩P[μ]dV = dR^{2d}∫⟨f,g⟩(Rζ)P[μ](Rζ)dσ`.
pub fn verify_radius_identity(
    f: &VectorPolynomial,
    g: &VectorPolynomial,
    mu: &Measure,
    radius: &Rational,
    cfg: &McConfig,
) -> Result<RichterReport> {
    check_pair(f, g, mu)?;
    if !(radius > &Rational::zero() && radius < &Rational::from_integer(1.into())) {
        return Err(Error::invalid("radius must lie in (0, 1)"));
    }
    let d = mu.dim();
    let r2 = radius * radius;
    let r2d = num_traits::pow::Pow::pow(radius, (2 * d) as i32);
    let lhs_density = |w: Option<&CMatrix>| -> Result<HermitianPolynomial> {
        let mut h = HermitianPolynomial::zero(d);
        for j in 0..d {
            let e = MultiIndex::unit(d, j);
            h = h.add(&gradient_density(&f.shift(&e), &g.shift(&e), w)?)?;
        }
        h.sub(&gradient_density(f, g, w)?.scale_real(&r2))
    };
    let dr = Rational::from_integer((d as i64).into());
    if let Some(w) = mu.density() {
        if !w.is_harmonic() {
            return Err(Error::precondition("radius identity needs a harmonic density or an atomic measure"));
        }
        let lhs = lhs_density(None)?.mul(&w)?.dilate(radius).ball_integral().scale(r2d.clone());
        let rhs = pointwise_pairing(f, g, None)?
            .mul(&w)?
            .dilate(radius)
            .sphere_integral()
            .scale(&dr * &r2d);
        let residual = &lhs - &rhs;
        return Ok(RichterReport::new(
            d,
            None,
            Some(radius),
            mu,
            KernelKind::Euclidean,
            InnerValue::Exact(lhs),
            InnerValue::Exact(rhs),
            InnerValue::Exact(residual),
        ));
    }
    // Atomic: P[μ] is a finite sum and both integrands are bounded for R < 1.
    let rf = crate::scalar::to_f64(radius);
    let atoms: Vec<(Vec<Complex64>, HermitianPolynomial, HermitianPolynomial)> = mu
        .atoms()
        .iter()
        .map(|a| {
            let m = a.weight().as_matrix();
            let (lh, bp) = if mu.is_matrix_valued() {
                (lhs_density(Some(&m))?, pointwise_pairing(f, g, Some(&m))?)
            } else {
                (lhs_density(None)?.scale(&m[(0, 0)]), pointwise_pairing(f, g, None)?.scale(&m[(0, 0)]))
            };
            Ok((a.point_f64(), lh.dilate(radius), bp.dilate(radius)))
        })
        .collect::<Result<_>>()?;
    let compiled: Vec<_> = atoms
        .iter()
        .map(|(z, l, b)| (z.clone(), l.compile(), b.compile()))
        .collect();
    let scale_l = crate::scalar::to_f64(&r2d);
    let lhs_est = monte_carlo(d, 2, cfg, |s, out| {
        let x = s.ball();
        let z: Vec<Complex64> = x.iter().map(|c| c * rf).collect();
        let mut v = Complex64::new(0.0, 0.0);
        for (zeta, l, _) in &compiled {
            match KernelKind::Euclidean.eval(&z, zeta) {
                Some(p) => v += l.eval(&x) * p,
                None => return false,
            }
        }
        v *= scale_l;
        out[0] = v.re;
        out[1] = v.im;
        true
    })?;
    let mut c2 = *cfg;
    c2.seed = atom_seed(cfg.seed, usize::MAX - 1);
    let scale_r = d as f64 * scale_l;
    let rhs_est = monte_carlo(d, 2, &c2, |s, out| {
        let x = s.sphere();
        let z: Vec<Complex64> = x.iter().map(|c| c * rf).collect();
        let mut v = Complex64::new(0.0, 0.0);
        for (zeta, _, b) in &compiled {
            match KernelKind::Euclidean.eval(&z, zeta) {
                Some(p) => v += b.eval(&x) * p,
                None => return false,
            }
        }
        v *= scale_r;
        out[0] = v.re;
        out[1] = v.im;
        true
    })?;
    let to_c = |e: &crate::poisson::McVecEstimate| ComplexEstimate {
        value: Complex64::new(e.mean[0], e.mean[1]),
        se_re: e.std_error[0],
        se_im: e.std_error[1],
    };
    let l = to_c(&lhs_est);
    let r = to_c(&rhs_est);
    let res = l.add(&r.scale(-1.0));
    Ok(RichterReport::new(
        d,
        None,
        Some(radius),
        mu,
        KernelKind::Euclidean,
        InnerValue::Estimate(l),
        InnerValue::Estimate(r),
        InnerValue::Estimate(res),
    ))
}

/// `∫⟨f,g⟩(Rζ)P[μ](Rζ)dσ − (Σ_j⟨z_jf, z_jg⟩_D − ⟨f,g⟩_D)` at each radius;
/// tends to 0 as `R → 1`. Harmonic densities only.
pub fn radius_drift(f: &VectorPolynomial, g: &VectorPolynomial, mu: &Measure, radii: &[Rational]) -> Result<Vec<ComplexRational>> {
    check_pair(f, g, mu)?;
    let w = mu
        .harmonic_density()
        .ok_or_else(|| Error::precondition("radius drift needs a harmonic density"))?;
    let cfg = McConfig::new(1, 0);
    let d = mu.dim();
    let mut limit = czero();
    for j in 0..d {
        let e = MultiIndex::unit(d, j);
        limit += dirichlet_inner(&f.shift(&e), &g.shift(&e), mu, &cfg)?
            .exact()
            .cloned()
            .expect("harmonic density gives exact values");
    }
    limit -= dirichlet_inner(f, g, mu, &cfg)?.exact().cloned().expect("exact");
    let base = pointwise_pairing(f, g, None)?.mul(&w)?;
    Ok(radii
        .iter()
        .map(|r| base.dilate(r).sphere_integral() - &limit)
        .collect())
}

/// Both sides of `Σ_k ‖z^{α+ε_k}‖²_∘ ≤ max{2(1+d), μ(∂B^d)/d}·‖z^α‖²_∘`,
/// exactly. Harmonic densities only.
pub fn mono_estimate(mu: &Measure, alpha: &MultiIndex) -> Result<(Rational, Rational)> {
    if mu.harmonic_density().is_none() {
        return Err(Error::precondition("mono_estimate needs a harmonic density"));
    }
    let cfg = McConfig::new(1, 0);
    let d = mu.dim();
    let norm = |a: &MultiIndex| -> Result<Rational> {
        let f = VectorPolynomial::monomial(a);
        Ok(circ_inner(&f, &f, mu, &cfg)?.exact().expect("exact").re.clone())
    };
    let mut lhs = Rational::zero();
    for k in 0..d {
        lhs += norm(&alpha.bump(k))?;
    }
    let mass = mu.scalar_mass()?;
    let c1 = Rational::from_integer((2 * (1 + d as i64)).into());
    let c2 = mass / Rational::from_integer((d as i64).into());
    let constant = if c1 > c2 { c1 } else { c2 };
    Ok((lhs, constant * norm(alpha)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{make_b_lambda, make_lambda_c};
    use crate::multiindex::enumerate_upto;
    use crate::scalar::{cone, cre, rat, rint};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn cfg() -> McConfig {
        McConfig::new(1, 0)
    }

    #[test]
    fn one_dimensional_surface_norms() {
        let mu = Measure::surface(1).unwrap();
        for k in 0..6u32 {
            let f = VectorPolynomial::monomial(&mi(&[k]));
            let v = dirichlet_inner(&f, &f, &mu, &cfg()).unwrap();
            assert_eq!(v, InnerValue::Exact(cre(rint(1 + k as i64))));
        }
    }

    #[test]
    fn constants_reproduce_value_at_zero() {
        let mu = make_b_lambda(&rint(1), &[cre(rat(1, 4)), czero()]).unwrap();
        let mut f = VectorPolynomial::monomial(&mi(&[1, 1]));
        f.add_term(mi(&[0, 0]), vec![cre(rat(2, 3))]);
        let x = VectorPolynomial::monomial_vec(&mi(&[0, 0]), vec![cre(rat(-1, 5))]);
        let v = dirichlet_inner(&f, &x, &mu, &cfg()).unwrap();
        assert_eq!(v, InnerValue::Exact(cre(rat(2, 3) * rat(-1, 5))));
    }

    #[test]
    fn circ_examples() {
        let mu = make_b_lambda(&rint(1), &[cre(rat(1, 4)), czero()]).unwrap();
        let one = VectorPolynomial::monomial(&mi(&[0, 0]));
        assert_eq!(circ_inner(&one, &one, &mu, &cfg()).unwrap(), InnerValue::Exact(cone()));
        let a = VectorPolynomial::monomial(&mi(&[1, 0]));
        let b = VectorPolynomial::monomial(&mi(&[2, 0]));
        assert_eq!(circ_inner(&a, &b, &mu, &cfg()).unwrap(), InnerValue::Exact(cre(rat(1, 12))));
        // each ‖z_k‖²_∘ = (1/d)∫P[μ]dV = μ(∂B)/d, so the sum is μ(∂B)
        let mu = make_lambda_c(&rint(3), &[rint(1), rint(-1)]).unwrap();
        let mut total = czero();
        for j in 0..2 {
            let z = VectorPolynomial::monomial(&MultiIndex::unit(2, j));
            total += circ_inner(&z, &z, &mu, &cfg()).unwrap().exact().unwrap().clone();
        }
        assert_eq!(total, cre(rint(3)));
    }

    #[test]
    fn richter_trivial_case() {
        for d in 1..=3 {
            let mu = Measure::surface(d).unwrap();
            let one = VectorPolynomial::monomial(&MultiIndex::zero(d));
            let r = verify_richter(&one, &one, &mu, 1, &cfg()).unwrap();
            assert_eq!(r.lhs_value, InnerValue::Exact(cre(rint(d as i64))));
            assert_eq!(r.rhs_value, InnerValue::Exact(cre(rint(d as i64))));
            assert!(r.pass);
        }
    }

    #[test]
    fn hermitian_symmetry() {
        let mu = make_b_lambda(&rint(2), &[cre(rat(1, 2)), cre(rat(1, 3))]).unwrap();
        for a in enumerate_upto(2, 2) {
            for b in enumerate_upto(2, 2) {
                let f = VectorPolynomial::monomial(&a);
                let g = VectorPolynomial::monomial(&b);
                let x = dirichlet_inner(&f, &g, &mu, &cfg()).unwrap();
                let y = dirichlet_inner(&g, &f, &mu, &cfg()).unwrap();
                assert_eq!(x.exact().unwrap(), &y.exact().unwrap().conj());
            }
        }
    }

    #[test]
    fn radius_identity_examples() {
        let mu = Measure::surface(1).unwrap();
        let z = VectorPolynomial::monomial(&mi(&[1]));
        let r = verify_radius_identity(&z, &z, &mu, &rat(1, 2), &cfg()).unwrap();
        assert!(r.pass);
        assert_eq!(r.mode, Mode::Exact);
        let mu = make_lambda_c(&rint(2), &[rat(1, 2), rat(-1, 2)]).unwrap();
        let one = VectorPolynomial::monomial(&mi(&[0, 0]));
        let r = verify_radius_identity(&one, &one, &mu, &rat(1, 2), &cfg()).unwrap();
        assert!(r.pass);
        assert!(verify_radius_identity(&one, &one, &mu, &rint(1), &cfg()).is_err());
    }

    #[test]
    fn drift_shrinks() {
        let mu = make_lambda_c(&rint(3), &[rint(1), rint(-1)]).unwrap();
        let mut f = VectorPolynomial::monomial(&mi(&[1, 1]));
        f.add_term(mi(&[0, 1]), vec![cre(rat(1, 2))]);
        let radii: Vec<Rational> = (1..=8).map(|k| rint(1) - rat(1, 1 << k)).collect();
        let drift = radius_drift(&f, &f, &mu, &radii).unwrap();
        let mags: Vec<Rational> = drift.iter().map(crate::scalar::norm_sqr).collect();
        assert!(mags.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn invariant_kernel_rejects_d1() {
        let mu = Measure::dirac(vec![cone()]).unwrap();
        let one = VectorPolynomial::monomial(&mi(&[0]));
        let case = RichterCase { p: one.clone(), q: one, k: 1 };
        assert!(falsify_invariant_kernel(&[case], &mu, &cfg()).is_err());
    }

    #[test]
    fn invariant_kernel_is_exact_for_surface() {
        let mu = Measure::surface(2).unwrap();
        let z1 = VectorPolynomial::monomial(&mi(&[1, 0]));
        let case = RichterCase { p: z1.clone(), q: z1, k: 1 };
        let r = falsify_invariant_kernel(&[case], &mu, &cfg()).unwrap();
        assert!(r[0].pass);
        assert!(!r[0].falsified());
    }
}
