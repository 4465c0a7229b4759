//! Euclidean and invariant Poisson kernels on the unit ball of `C^d`, and
//! seeded, stream-parallel Monte Carlo quadrature on the ball and the sphere.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{HermitianPolynomial, PolyBatch};

/// Samples closer than this to the pole of a kernel are rejected.
pub const POLE_GUARD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint {
    coords: Vec<Complex64>,
    norm: f64,
}

impl BallPoint {
    /// A point with `‖z‖ < 1`.
    pub fn interior(coords: Vec<Complex64>) -> Result<Self> {
        let p = Self::raw(coords)?;
        if p.norm.is_nan() || p.norm >= 1.0 {
            return Err(Error::Domain(format!("interior point has norm {}", p.norm)));
        }
        Ok(p)
    }

    /// A point with `‖ζ‖ = 1` to within `1e-12`.
    pub fn boundary(coords: Vec<Complex64>) -> Result<Self> {
        let p = Self::raw(coords)?;
        if (p.norm - 1.0).abs() > 1e-12 || p.norm.is_nan() {
            return Err(Error::Domain(format!("boundary point has norm {}", p.norm)));
        }
        Ok(p)
    }

    fn raw(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("point must have dimension d >= 1"));
        }
        let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Ok(BallPoint { coords, norm })
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }
}

fn check_pair(z: &BallPoint, zeta: &BallPoint) -> Result<()> {
    if z.dim() != zeta.dim() {
        return Err(Error::DimensionMismatch {
            expected: zeta.dim(),
            found: z.dim(),
        });
    }
    if z.norm >= 1.0 {
        return Err(Error::Domain("z must lie in the open ball".into()));
    }
    if (zeta.norm - 1.0).abs() > 1e-12 {
        return Err(Error::Domain("ζ must lie on the sphere".into()));
    }
    Ok(())
}

/// `P(z, ζ) = (1 − ‖z‖²)/‖z − ζ‖^{2d}`.
pub fn poisson_kernel(z: &BallPoint, zeta: &BallPoint) -> Result<f64> {
    check_pair(z, zeta)?;
    let dist2 = dist_sqr(&z.coords, &zeta.coords);
    if dist2 == 0.0 {
        return Err(Error::Domain("z coincides with ζ".into()));
    }
    Ok(poisson_raw(&z.coords, dist2))
}

/// `P_ι(z, ζ) = (1 − ‖z‖²)^d/|1 − ⟨z, ζ⟩|^{2d}`.
pub fn invariant_poisson_kernel(z: &BallPoint, zeta: &BallPoint) -> Result<f64> {
    check_pair(z, zeta)?;
    if dist_sqr(&z.coords, &zeta.coords) == 0.0 {
        return Err(Error::Domain("z coincides with ζ".into()));
    }
    Ok(invariant_raw(&z.coords, &zeta.coords))
}

pub(crate) fn dist_sqr(z: &[Complex64], w: &[Complex64]) -> f64 {
    z.iter().zip(w).map(|(a, b)| (a - b).norm_sqr()).sum()
}

pub(crate) fn poisson_raw(z: &[Complex64], dist2: f64) -> f64 {
    let d = z.len() as i32;
    let n2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    (1.0 - n2) / dist2.powi(d)
}

pub(crate) fn invariant_raw(z: &[Complex64], zeta: &[Complex64]) -> f64 {
    let d = z.len() as i32;
    let n2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    let ip: Complex64 = z.iter().zip(zeta).map(|(a, b)| a * b.conj()).sum();
    let den = (Complex64::new(1.0, 0.0) - ip).norm_sqr();
    (1.0 - n2).powi(d) / den.powi(d)
}

/// Which of the two kernels to integrate against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Euclidean,
    Invariant,
}

impl KernelKind {
    pub fn eval(self, z: &[Complex64], zeta: &[Complex64]) -> Option<f64> {
        let dist2 = dist_sqr(z, zeta);
        if dist2 < POLE_GUARD * POLE_GUARD {
            return None;
        }
        Some(match self {
            KernelKind::Euclidean => poisson_raw(z, dist2),
            KernelKind::Invariant => invariant_raw(z, zeta),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Stratification {
    #[default]
    None,
    /// Stratify the radial variable `u = r^{2d}` into equal-mass layers, one
    /// sample per layer within each stream.
    Radial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub sample_count: u64,
    pub seed: u64,
    #[serde(default)]
    pub stratification: Stratification,
    #[serde(default = "default_streams")]
    pub streams: usize,
}

fn default_streams() -> usize {
    8
}

impl McConfig {
    pub fn new(sample_count: u64, seed: u64) -> Self {
        McConfig {
            sample_count,
            seed,
            stratification: Stratification::None,
            streams: default_streams(),
        }
    }

    pub fn with_stratification(mut self, s: Stratification) -> Self {
        self.stratification = s;
        self
    }

    pub fn with_streams(mut self, streams: usize) -> Self {
        self.streams = streams;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.sample_count == 0 {
            return Err(Error::invalid("sample_count must be at least 1"));
        }
        if self.streams == 0 {
            return Err(Error::invalid("streams must be at least 1"));
        }
        Ok(())
    }
}

/// A scalar Monte Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub rejected: u64,
}

/// Component-wise estimates of a vector-valued integrand.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McVecEstimate {
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    pub samples: u64,
    pub rejected: u64,
}

impl McVecEstimate {
    pub fn component(&self, i: usize) -> McEstimate {
        McEstimate {
            estimate: self.mean[i],
            std_error: self.std_error[i],
            samples: self.samples,
            rejected: self.rejected,
        }
    }
}

/// Per-stream random source handed to integrands.
pub struct Sampler {
    rng: ChaCha8Rng,
    d: usize,
    layer: Option<(u64, u64)>,
}

impl Sampler {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform point on `∂B^d` from a normalized `2d`-dimensional Gaussian.
    pub fn sphere(&mut self) -> Vec<Complex64> {
        loop {
            let v: Vec<Complex64> = (0..self.d)
                .map(|_| {
                    Complex64::new(
                        self.rng.sample(StandardNormal),
                        self.rng.sample(StandardNormal),
                    )
                })
                .collect();
            let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if n > 0.0 {
                return v.into_iter().map(|c| c / n).collect();
            }
        }
    }

    /// Uniform point in `B^d`: radius `u^{1/(2d)}` times a sphere point.
    pub fn ball(&mut self) -> Vec<Complex64> {
        let v = self.uniform();
        let u = match self.layer {
            Some((i, n)) => (i as f64 + v) / n as f64,
            None => v,
        };
        let r = u.powf(1.0 / (2.0 * self.d as f64));
        self.sphere().into_iter().map(|c| c * r).collect()
    }

    /// Importance sample for integrals over `B^d` with a pole at the boundary
    /// point `ζ`. Draws from the even mixture of `V` and the density
    /// `∝ ‖z − ζ‖^{1−2d}` on `{‖z − ζ‖ < 2} ⊂ R^{2d}`, whose radial law is
    /// uniform on `[0, 2]`. Returns the point and the likelihood ratio
    /// `dV/dq`, which is 0 outside the ball and bounded by 2 inside, so that
    /// `E[f(z)·w] = ∫_{B^d} f dV`. `None` means the draw fell inside the
    /// pole guard.
    pub fn ball_near(&mut self, zeta: &[Complex64]) -> Option<(Vec<Complex64>, f64)> {
        let z = if self.uniform() < 0.5 {
            self.ball()
        } else {
            let rho = 2.0 * self.uniform();
            let u = self.sphere();
            zeta.iter().zip(u).map(|(a, b)| a + b * rho).collect()
        };
        let dist = dist_sqr(&z, zeta).sqrt();
        if dist < POLE_GUARD {
            return None;
        }
        let n2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        if n2 >= 1.0 {
            return Some((z, 0.0));
        }
        let d = self.d as f64;
        // V(B^d)·h(z) = ρ^{1−2d}/(4d) for ρ < 2
        let h = if dist < 2.0 { dist.powf(1.0 - 2.0 * d) / (4.0 * d) } else { 0.0 };
        Some((z, 1.0 / (0.5 + 0.5 * h)))
    }
}

#[derive(Clone)]
struct Accum {
    n: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
    rejected: u64,
}

impl Accum {
    fn new(k: usize) -> Self {
        Accum {
            n: 0,
            mean: vec![0.0; k],
            m2: vec![0.0; k],
            rejected: 0,
        }
    }

    fn push(&mut self, x: &[f64]) {
        self.n += 1;
        let n = self.n as f64;
        for i in 0..x.len() {
            let delta = x[i] - self.mean[i];
            self.mean[i] += delta / n;
            self.m2[i] += delta * (x[i] - self.mean[i]);
        }
    }

    // Chan et al. pairwise combination.
    fn merge(mut self, other: &Accum) -> Accum {
        if other.n > 0 {
            let (na, nb) = (self.n as f64, other.n as f64);
            let n = na + nb;
            for i in 0..self.mean.len() {
                let delta = other.mean[i] - self.mean[i];
                self.mean[i] += delta * nb / n;
                self.m2[i] += other.m2[i] + delta * delta * na * nb / n;
            }
            self.n += other.n;
        }
        self.rejected += other.rejected;
        self
    }
}

/// Stream-parallel Monte Carlo driver for a `k`-component integrand.
///
/// The integrand draws its own points from the [`Sampler`], writes `k`
/// values, and returns `false` to reject the sample. The budget is split over
/// `cfg.streams` ChaCha streams keyed by `cfg.seed`; results are merged in
/// stream order, so they do not depend on the thread count.
pub fn monte_carlo<F>(d: usize, k: usize, cfg: &McConfig, f: F) -> Result<McVecEstimate>
where
    F: Fn(&mut Sampler, &mut [f64]) -> bool + Sync,
{
    cfg.validate()?;
    if d == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let streams = cfg.streams.min(cfg.sample_count as usize).max(1);
    let base = cfg.sample_count / streams as u64;
    let extra = cfg.sample_count % streams as u64;
    let parts: Vec<Result<Accum>> = (0..streams)
        .into_par_iter()
        .map(|s| {
            let n = base + u64::from((s as u64) < extra);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(s as u64);
            let mut sampler = Sampler { rng, d, layer: None };
            let mut acc = Accum::new(k);
            let mut buf = vec![0.0; k];
            for i in 0..n {
                if cfg.stratification == Stratification::Radial {
                    sampler.layer = Some((i, n));
                }
                if !f(&mut sampler, &mut buf) {
                    acc.rejected += 1;
                    continue;
                }
                if buf.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Quadrature(format!(
                        "non-finite integrand value in stream {s}, sample {i}"
                    )));
                }
                acc.push(&buf);
            }
            Ok(acc)
        })
        .collect();
    let mut total = Accum::new(k);
    for p in parts {
        total = total.merge(&p?);
    }
    if total.n == 0 {
        return Err(Error::Quadrature("every sample was rejected".into()));
    }
    let n = total.n as f64;
    let std_error = total
        .m2
        .iter()
        .map(|m2| if total.n > 1 { (m2 / (n - 1.0) / n).sqrt() } else { 0.0 })
        .collect();
    Ok(McVecEstimate {
        mean: total.mean,
        std_error,
        samples: total.n,
        rejected: total.rejected,
    })
}

/// `∫_{∂B^d} f dσ`.
pub fn mc_sphere<F>(d: usize, f: F, cfg: &McConfig) -> Result<McEstimate>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    monte_carlo(d, 1, cfg, |s, out| {
        let z = s.sphere();
        out[0] = f(&z);
        true
    })
    .map(|e| e.component(0))
}

/// `∫_{B^d} f dV`.
pub fn mc_ball<F>(d: usize, f: F, cfg: &McConfig) -> Result<McEstimate>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    monte_carlo(d, 1, cfg, |s, out| {
        let z = s.ball();
        out[0] = f(&z);
        true
    })
    .map(|e| e.component(0))
}

/// `∫_{B^d} K(z, ζ) dV(z)` by uniform sampling, with samples inside the
/// pole guard rejected. For `d ≥ 2` the kernel is not square integrable and
/// the reported standard error is unreliable; see [`mc_ball_kernel`].
pub fn mc_ball_kernel_uniform(kind: KernelKind, zeta: &BallPoint, cfg: &McConfig) -> Result<McEstimate> {
    let zc = zeta.coords().to_vec();
    monte_carlo(zeta.dim(), 1, cfg, |s, out| {
        let z = s.ball();
        match kind.eval(&z, &zc) {
            Some(v) => {
                out[0] = v;
                true
            }
            None => false,
        }
    })
    .map(|e| e.component(0))
}

/// `∫_{B^d} K(z, ζ) dV(z)` by pole-adapted importance sampling
/// ([`Sampler::ball_near`]); the weighted integrand has finite variance for
/// both kernels.
pub fn mc_ball_kernel(kind: KernelKind, zeta: &BallPoint, cfg: &McConfig) -> Result<McEstimate> {
    if (zeta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain("ζ must lie on the sphere".into()));
    }
    let zc = zeta.coords().to_vec();
    monte_carlo(zeta.dim(), 1, cfg, |s, out| {
        let Some((z, w)) = s.ball_near(&zc) else {
            return false;
        };
        out[0] = if w == 0.0 {
            0.0
        } else {
            match kind.eval(&z, &zc) {
                Some(v) => v * w,
                None => return false,
            }
        };
        true
    })
    .map(|e| e.component(0))
}

/// `∫_{∂B^d} K(z, ζ) dσ(ζ)` for a fixed interior `z`.
pub fn mc_sphere_kernel(kind: KernelKind, z: &BallPoint, cfg: &McConfig) -> Result<McEstimate> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain("z must lie in the open ball".into()));
    }
    let zc = z.coords().to_vec();
    monte_carlo(z.dim(), 1, cfg, |s, out| {
        let zeta = s.sphere();
        match kind.eval(&zc, &zeta) {
            Some(v) => {
                out[0] = v;
                true
            }
            None => false,
        }
    })
    .map(|e| e.component(0))
}

/// A complex Monte Carlo estimate with separate standard errors for the real
/// and imaginary parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexEstimate {
    pub value: Complex64,
    pub se_re: f64,
    pub se_im: f64,
}

impl ComplexEstimate {
    pub fn exact(value: Complex64) -> Self {
        ComplexEstimate {
            value,
            se_re: 0.0,
            se_im: 0.0,
        }
    }

    pub fn add(&self, other: &ComplexEstimate) -> ComplexEstimate {
        ComplexEstimate {
            value: self.value + other.value,
            se_re: self.se_re.hypot(other.se_re),
            se_im: self.se_im.hypot(other.se_im),
        }
    }

    pub fn scale(&self, s: f64) -> ComplexEstimate {
        ComplexEstimate {
            value: self.value * s,
            se_re: self.se_re * s.abs(),
            se_im: self.se_im * s.abs(),
        }
    }

    /// Largest of `|Re|/se_re` and `|Im|/se_im`; infinite for a nonzero part
    /// with zero error.
    pub fn z_score(&self) -> f64 {
        let part = |x: f64, se: f64| {
            if x == 0.0 {
                0.0
            } else if se == 0.0 {
                f64::INFINITY
            } else {
                x.abs() / se
            }
        };
        part(self.value.re, self.se_re).max(part(self.value.im, self.se_im))
    }

    /// `|Re| ≤ k·se_re + tol` and the same for the imaginary part.
    pub fn within(&self, k: f64, tol: f64) -> bool {
        self.value.re.abs() <= k * self.se_re + tol && self.value.im.abs() <= k * self.se_im + tol
    }
}

/// Where the kernel's boundary argument sits.
#[derive(Clone, Debug)]
pub enum Anchor {
    /// A fixed point `ζ` of the sphere.
    Point(Vec<Complex64>),
    /// `ζ` averaged against the density `w dσ`.
    Density(HermitianPolynomial),
}

/// Estimates `∫_{B^d} h_i(z) K(z, ζ) dV(z)` for several polynomials at once
/// (averaged over `ζ ~ w dσ` for a density anchor).
///
/// The constant and linear Taylor terms of `h_i` at `ζ` are integrated in
/// closed form using `∫ K dV = 1` and `∫ z_j K dV = d/(d+1)·ζ_j` (both hold
/// for the two kernels), and only the quadratic remainder is sampled, with
/// pole-adapted importance sampling.
pub fn kernel_integrals(
    kind: KernelKind,
    anchor: &Anchor,
    polys: &[HermitianPolynomial],
    cfg: &McConfig,
) -> Result<(Vec<ComplexEstimate>, u64, u64)> {
    let d = match anchor {
        Anchor::Point(z) => z.len(),
        Anchor::Density(w) => w.dim(),
    };
    if polys.iter().any(|p| p.dim() != d) {
        return Err(Error::invalid("polynomial dimension does not match the anchor"));
    }
    if let Anchor::Point(z) = anchor {
        let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("ζ must lie on the sphere".into()));
        }
    }
    let n = polys.len();
    // values, then ∂_j, then ∂̄_j, polynomial-major
    let mut all = Vec::with_capacity(n * (2 * d + 1));
    for p in polys {
        all.push(p.clone());
        for j in 0..d {
            all.push(p.dz(j));
        }
        for j in 0..d {
            all.push(p.dzbar(j));
        }
    }
    let stride = 2 * d + 1;
    let full = PolyBatch::new(d, &all);
    let values = PolyBatch::new(d, polys);
    let inv = 1.0 / (d as f64 + 1.0);

    // Per-anchor Taylor data: constant part of the estimator and the
    // linearization coefficients.
    let taylor = |zeta: &[Complex64], scratch: &mut Vec<Complex64>, buf: &mut [Complex64]| -> Vec<(Complex64, Complex64)> {
        full.eval_into(zeta, scratch, buf);
        (0..n)
            .map(|i| {
                let b = &buf[i * stride..(i + 1) * stride];
                let mut lin_at_zeta = Complex64::new(0.0, 0.0);
                for j in 0..d {
                    lin_at_zeta += b[1 + j] * zeta[j] + b[1 + d + j] * zeta[j].conj();
                }
                (b[0] - lin_at_zeta * inv, b[0])
            })
            .collect()
    };

    let fixed = match anchor {
        Anchor::Point(z) => {
            let mut scratch = Vec::new();
            let mut buf = vec![Complex64::new(0.0, 0.0); all.len()];
            let t = taylor(z, &mut scratch, &mut buf);
            Some((z.clone(), t, buf))
        }
        Anchor::Density(_) => None,
    };
    let density = match anchor {
        Anchor::Density(w) => Some(w.compile()),
        Anchor::Point(_) => None,
    };

    let est = monte_carlo(d, 2 * n, cfg, |s, out| {
        let mut scratch = Vec::new();
        let owned;
        let (zeta, consts, derivs, weight): (&[Complex64], &[(Complex64, Complex64)], &[Complex64], f64) =
            match (&fixed, &density) {
                (Some((z, t, buf)), _) => (z, t, buf, 1.0),
                (None, Some(w)) => {
                    let zeta = s.sphere();
                    let mut buf = vec![Complex64::new(0.0, 0.0); all.len()];
                    let t = taylor(&zeta, &mut scratch, &mut buf);
                    let wv = w.eval(&zeta).re;
                    owned = (zeta, t, buf);
                    (&owned.0, &owned.1, &owned.2, wv)
                }
                _ => unreachable!(),
            };
        let Some((z, iw)) = s.ball_near(zeta) else {
            return false;
        };
        let k = if iw == 0.0 {
            0.0
        } else {
            match kind.eval(&z, zeta) {
                Some(v) => v * iw,
                None => return false,
            }
        };
        let mut hz = vec![Complex64::new(0.0, 0.0); n];
        if k != 0.0 {
            values.eval_into(&z, &mut scratch, &mut hz);
        }
        let dz: Vec<Complex64> = z.iter().zip(zeta).map(|(a, b)| a - b).collect();
        for i in 0..n {
            let mut v = if fixed.is_some() { Complex64::new(0.0, 0.0) } else { consts[i].0 };
            if k != 0.0 {
                let b = &derivs[i * stride..(i + 1) * stride];
                let mut lin = consts[i].1;
                for j in 0..d {
                    lin += b[1 + j] * dz[j] + b[1 + d + j] * dz[j].conj();
                }
                v += (hz[i] - lin) * k;
            }
            v *= weight;
            out[2 * i] = v.re;
            out[2 * i + 1] = v.im;
        }
        true
    })?;
    let estimates = (0..n)
        .map(|i| {
            let base = fixed.as_ref().map_or(Complex64::new(0.0, 0.0), |(_, t, _)| t[i].0);
            ComplexEstimate {
                value: base + Complex64::new(est.mean[2 * i], est.mean[2 * i + 1]),
                se_re: est.std_error[2 * i],
                se_im: est.std_error[2 * i + 1],
            }
        })
        .collect();
    Ok((estimates, est.samples, est.rejected))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[(f64, f64)]) -> Vec<Complex64> {
        v.iter().map(|&(a, b)| Complex64::new(a, b)).collect()
    }

    #[test]
    fn kernel_at_origin_is_one() {
        let zeta = BallPoint::boundary(pt(&[(0.6, 0.0), (0.0, 0.8)])).unwrap();
        let z = BallPoint::interior(pt(&[(0.0, 0.0), (0.0, 0.0)])).unwrap();
        assert_eq!(poisson_kernel(&z, &zeta).unwrap(), 1.0);
        assert_eq!(invariant_poisson_kernel(&z, &zeta).unwrap(), 1.0);
    }

    #[test]
    fn disc_kernel_closed_form() {
        let zeta = BallPoint::boundary(pt(&[(1.0, 0.0)])).unwrap();
        for r in [0.1, 0.5, 0.9] {
            let z = BallPoint::interior(pt(&[(r, 0.0)])).unwrap();
            let p = poisson_kernel(&z, &zeta).unwrap();
            assert!((p - (1.0 + r) / (1.0 - r)).abs() < 1e-12 * p);
        }
    }

    #[test]
    fn invariant_substitution() {
        let z = BallPoint::interior(pt(&[(0.5, 0.0), (0.0, 0.0)])).unwrap();
        let zeta = BallPoint::boundary(pt(&[(0.0, 0.0), (1.0, 0.0)])).unwrap();
        assert!((invariant_poisson_kernel(&z, &zeta).unwrap() - 9.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let zeta = BallPoint::boundary(pt(&[(1.0, 0.0)])).unwrap();
        assert!(BallPoint::interior(pt(&[(1.0, 0.0)])).is_err());
        assert!(BallPoint::boundary(pt(&[(0.5, 0.0)])).is_err());
        let near = BallPoint::interior(pt(&[(0.5, 0.0)])).unwrap();
        assert!(poisson_kernel(&near, &near).is_err());
        let z2 = BallPoint::interior(pt(&[(0.1, 0.0), (0.0, 0.0)])).unwrap();
        assert!(poisson_kernel(&z2, &zeta).is_err());
    }

    #[test]
    fn constant_integrand_has_zero_error() {
        let cfg = McConfig::new(1000, 7);
        let e = mc_sphere(3, |_| 1.0, &cfg).unwrap();
        assert_eq!(e.estimate, 1.0);
        assert_eq!(e.std_error, 0.0);
        let e = mc_ball(2, |_| 1.0, &cfg).unwrap();
        assert_eq!(e.estimate, 1.0);
        assert!(mc_ball(2, |_| 1.0, &McConfig::new(0, 1)).is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = McConfig::new(5000, 42);
        let f = |z: &[Complex64]| z[0].norm_sqr();
        let a = mc_ball(2, f, &cfg).unwrap();
        let b = mc_ball(2, f, &cfg).unwrap();
        assert_eq!(a, b);
        let c = mc_ball(2, f, &McConfig::new(5000, 43)).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }

    #[test]
    fn non_finite_is_reported() {
        let cfg = McConfig::new(100, 1);
        let e = mc_sphere(2, |_| f64::NAN, &cfg);
        assert!(matches!(e, Err(Error::Quadrature(_))));
    }

    #[test]
    fn radial_stratification_estimates_moments() {
        let cfg = McConfig::new(200_000, 3).with_stratification(Stratification::Radial);
        // ∫ |z_1|² dV = 1/3 for d = 2
        let e = mc_ball(2, |z| z[0].norm_sqr(), &cfg).unwrap();
        assert!((e.estimate - 1.0 / 3.0).abs() < 4.0 * e.std_error + 1e-12);
    }
}
