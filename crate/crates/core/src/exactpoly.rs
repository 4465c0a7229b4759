//! Hermitian polynomials `Σ c_{αβ} z^α z̄^β` with exact complex-rational
//! coefficients: arithmetic, complex derivatives, the complex Laplacian and
//! exact monomial integration over the ball and the sphere.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multiindex::{factorial, MultiIndex};
use crate::scalar::{c_to_f64, cre, czero, ComplexRational, Rational};

#[derive(Clone, PartialEq, Debug)]
pub struct HermitianPolynomial {
    dim: usize,
    coeffs: BTreeMap<(MultiIndex, MultiIndex), ComplexRational>,
}

impl HermitianPolynomial {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        HermitianPolynomial {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: ComplexRational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::zero(dim), MultiIndex::zero(dim), c);
        p
    }

    pub fn monomial(alpha: MultiIndex, beta: MultiIndex, c: ComplexRational) -> Result<Self> {
        if alpha.dim() != beta.dim() {
            return Err(Error::DimensionMismatch {
                expected: alpha.dim(),
                found: beta.dim(),
            });
        }
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha, beta, c);
        Ok(p)
    }

    /// The holomorphic monomial `z^α`.
    pub fn z(alpha: &MultiIndex) -> Self {
        let mut p = Self::zero(alpha.dim());
        p.add_term(alpha.clone(), MultiIndex::zero(alpha.dim()), crate::scalar::cone());
        p
    }

    /// `z_j` (0-based `j`).
    pub fn coordinate(dim: usize, j: usize) -> Self {
        Self::z(&MultiIndex::unit(dim, j))
    }

    /// `‖z‖² = Σ z_j z̄_j`.
    pub fn norm_squared(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for j in 0..dim {
            let e = MultiIndex::unit(dim, j);
            p.add_term(e.clone(), e, crate::scalar::cone());
        }
        p
    }

    /// Builds a holomorphic polynomial from `(α, c)` pairs.
    pub fn holomorphic(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, ComplexRational)>) -> Result<Self> {
        let mut p = Self::zero(dim);
        for (a, c) in terms {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.dim(),
                });
            }
            p.add_term(a, MultiIndex::zero(dim), c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, &ComplexRational)> {
        self.coeffs.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn coeff(&self, alpha: &MultiIndex, beta: &MultiIndex) -> ComplexRational {
        self.coeffs
            .get(&(alpha.clone(), beta.clone()))
            .cloned()
            .unwrap_or_else(czero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every term has an empty `z̄` part.
    pub fn is_holomorphic(&self) -> bool {
        self.coeffs.keys().all(|(_, b)| b.is_zero())
    }

    /// Real-valuedness: `c_{αβ} = conj(c_{βα})` for every key.
    pub fn is_real(&self) -> bool {
        self.coeffs
            .iter()
            .all(|((a, b), c)| self.coeff(b, a) == c.conj())
    }

    /// Largest `|α| + |β|` among the terms; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|(a, b)| a.order() + b.order())
            .max()
            .unwrap_or(0)
    }

    /// Largest holomorphic degree `|α|`.
    pub fn holomorphic_degree(&self) -> u32 {
        self.coeffs.keys().map(|(a, _)| a.order()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, beta: MultiIndex, c: ComplexRational) {
        debug_assert_eq!(alpha.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        let key = (alpha, beta);
        let remove = match self.coeffs.get_mut(&key) {
            Some(v) => {
                *v += c;
                v.is_zero()
            }
            None => {
                self.coeffs.insert(key.clone(), c);
                false
            }
        };
        if remove {
            self.coeffs.remove(&key);
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for ((a, b), c) in &other.coeffs {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for ((a, b), c) in &other.coeffs {
            out.add_term(a.clone(), b.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for ((a1, b1), c1) in &self.coeffs {
            for ((a2, b2), c2) in &other.coeffs {
                out.add_term(a1.plus(a2), b1.plus(b2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &ComplexRational) -> Self {
        let mut out = Self::zero(self.dim);
        if s.is_zero() {
            return out;
        }
        for ((a, b), c) in &self.coeffs {
            out.coeffs.insert((a.clone(), b.clone()), c * s);
        }
        out
    }

    pub fn scale_real(&self, s: &Rational) -> Self {
        self.scale(&cre(s.clone()))
    }

    /// Pointwise complex conjugate: `z^α z̄^β ↦ z^β z̄^α`, coefficients conjugated.
    pub fn conj(&self) -> Self {
        HermitianPolynomial {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|((a, b), c)| ((b.clone(), a.clone()), c.conj()))
                .collect(),
        }
    }

    /// `∂/∂z_j`.
    pub fn dz(&self, j: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a, b), c) in &self.coeffs {
            if let Some(lower) = a.lower(j) {
                out.add_term(lower, b.clone(), c.scale(Rational::from_integer(a[j].into())));
            }
        }
        out
    }

    /// `∂/∂z̄_j`.
    pub fn dzbar(&self, j: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a, b), c) in &self.coeffs {
            if let Some(lower) = b.lower(j) {
                out.add_term(a.clone(), lower, c.scale(Rational::from_integer(b[j].into())));
            }
        }
        out
    }

    /// The complex Laplacian `Σ_j ∂²/∂z̄_j∂z_j`.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a, b), c) in &self.coeffs {
            for j in 0..self.dim {
                if a[j] > 0 && b[j] > 0 {
                    let f = Rational::from_integer((a[j] * b[j]).into());
                    out.add_term(a.lower(j).unwrap(), b.lower(j).unwrap(), c.scale(f));
                }
            }
        }
        out
    }

    /// `∫_{∂B^d} h dσ`, using `∫ ζ^α ζ̄^β dσ = δ_{αβ} α!(d−1)!/(|α|+d−1)!`.
    pub fn sphere_integral(&self) -> ComplexRational {
        let d = self.dim as u32;
        self.coeffs
            .iter()
            .filter(|((a, b), _)| a == b)
            .fold(czero(), |acc, ((a, _), c)| {
                let w = Rational::new(a.factorial() * factorial(d - 1), factorial(a.order() + d - 1));
                acc + c.scale(w)
            })
    }

    /// `∫_{B^d} h dV`, using `∫ z^α z̄^β dV = δ_{αβ} α! d!/(|α|+d)!`.
    pub fn ball_integral(&self) -> ComplexRational {
        let d = self.dim as u32;
        self.coeffs
            .iter()
            .filter(|((a, b), _)| a == b)
            .fold(czero(), |acc, ((a, _), c)| {
                let w = Rational::new(a.factorial() * factorial(d), factorial(a.order() + d));
                acc + c.scale(w)
            })
    }

    /// `h(R·)`: each term picks up `R^{|α|+|β|}`.
    pub fn dilate(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.dim);
        for ((a, b), c) in &self.coeffs {
            let k = (a.order() + b.order()) as i32;
            out.add_term(a.clone(), b.clone(), c.scale(num_traits::pow::Pow::pow(r, k)));
        }
        out
    }

    /// Exact evaluation at a complex-rational point.
    pub fn eval_exact(&self, z: &[ComplexRational]) -> Result<ComplexRational> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        let zc: Vec<ComplexRational> = z.iter().map(|w| w.conj()).collect();
        let mut total = czero();
        for ((a, b), c) in &self.coeffs {
            let mut t = c.clone();
            for j in 0..self.dim {
                for _ in 0..a[j] {
                    t *= &z[j];
                }
                for _ in 0..b[j] {
                    t *= &zc[j];
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Depends only on `(|z_1|²,…,|z_d|²)`: every term has `α = β`.
    pub fn is_torus_invariant(&self) -> bool {
        self.coeffs.keys().all(|(a, b)| a == b)
    }

    pub fn is_harmonic(&self) -> bool {
        self.laplacian().is_zero()
    }

    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly::new(self)
    }
}

/// `⟨∇f, ∇g⟩ = Σ_j ∂_j f · conj(∂_j g)` for holomorphic `f`, `g`.
pub fn gradient_pairing(f: &HermitianPolynomial, g: &HermitianPolynomial) -> Result<HermitianPolynomial> {
    f.check_dim(g)?;
    if !f.is_holomorphic() || !g.is_holomorphic() {
        return Err(Error::invalid("gradient_pairing expects holomorphic polynomials"));
    }
    let mut out = HermitianPolynomial::zero(f.dim);
    for j in 0..f.dim {
        let term = f.dz(j).mul(&g.dz(j).conj())?;
        out = out.add(&term)?;
    }
    Ok(out)
}

pub fn laplacian(h: &HermitianPolynomial) -> HermitianPolynomial {
    h.laplacian()
}

pub fn sphere_integral(h: &HermitianPolynomial) -> ComplexRational {
    h.sphere_integral()
}

pub fn ball_integral(h: &HermitianPolynomial) -> ComplexRational {
    h.ball_integral()
}

/// Float evaluator with per-coordinate power tables.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    dim: usize,
    max_a: Vec<u32>,
    max_b: Vec<u32>,
    terms: Vec<(Vec<u32>, Vec<u32>, Complex64)>,
}

impl CompiledPoly {
    fn new(p: &HermitianPolynomial) -> Self {
        let d = p.dim;
        let mut max_a = vec![0; d];
        let mut max_b = vec![0; d];
        let terms = p
            .coeffs
            .iter()
            .map(|((a, b), c)| {
                for j in 0..d {
                    max_a[j] = max_a[j].max(a[j]);
                    max_b[j] = max_b[j].max(b[j]);
                }
                (a.entries().to_vec(), b.entries().to_vec(), c_to_f64(c))
            })
            .collect();
        CompiledPoly {
            dim: d,
            max_a,
            max_b,
            terms,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.dim);
        let pows: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..self.dim)
            .map(|j| (powers(z[j], self.max_a[j]), powers(z[j].conj(), self.max_b[j])))
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (a, b, c) in &self.terms {
            let mut t = *c;
            for j in 0..self.dim {
                t *= pows[j].0[a[j] as usize] * pows[j].1[b[j] as usize];
            }
            total += t;
        }
        total
    }
}

/// Many polynomials evaluated together over a shared table of monomial values.
#[derive(Clone, Debug)]
pub struct PolyBatch {
    dim: usize,
    max_a: Vec<u32>,
    max_b: Vec<u32>,
    monomials: Vec<(Vec<u32>, Vec<u32>)>,
    polys: Vec<Vec<(usize, Complex64)>>,
}

impl PolyBatch {
    pub fn new(dim: usize, polys: &[HermitianPolynomial]) -> Self {
        let mut index: BTreeMap<(MultiIndex, MultiIndex), usize> = BTreeMap::new();
        let mut monomials = Vec::new();
        let mut max_a = vec![0; dim];
        let mut max_b = vec![0; dim];
        let compiled = polys
            .iter()
            .map(|p| {
                assert_eq!(p.dim, dim, "batch dimension mismatch");
                p.coeffs
                    .iter()
                    .map(|((a, b), c)| {
                        let k = *index.entry((a.clone(), b.clone())).or_insert_with(|| {
                            for j in 0..dim {
                                max_a[j] = max_a[j].max(a[j]);
                                max_b[j] = max_b[j].max(b[j]);
                            }
                            monomials.push((a.entries().to_vec(), b.entries().to_vec()));
                            monomials.len() - 1
                        });
                        (k, c_to_f64(c))
                    })
                    .collect()
            })
            .collect();
        PolyBatch {
            dim,
            max_a,
            max_b,
            monomials,
            polys: compiled,
        }
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Writes every polynomial's value at `z` into `out`; `scratch` is reused
    /// between calls.
    pub fn eval_into(&self, z: &[Complex64], scratch: &mut Vec<Complex64>, out: &mut [Complex64]) {
        debug_assert_eq!(z.len(), self.dim);
        let pows: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..self.dim)
            .map(|j| (powers(z[j], self.max_a[j]), powers(z[j].conj(), self.max_b[j])))
            .collect();
        scratch.clear();
        for (a, b) in &self.monomials {
            let mut t = Complex64::new(1.0, 0.0);
            for j in 0..self.dim {
                t *= pows[j].0[a[j] as usize] * pows[j].1[b[j] as usize];
            }
            scratch.push(t);
        }
        for (o, p) in out.iter_mut().zip(&self.polys) {
            *o = p.iter().map(|(k, c)| c * scratch[*k]).sum();
        }
    }
}

fn powers(x: Complex64, n: u32) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut cur = Complex64::new(1.0, 0.0);
    out.push(cur);
    for _ in 0..n {
        cur *= x;
        out.push(cur);
    }
    out
}

/// `2d ∫_0^1 r^{2d−1+2m} dr = d/(d+m)`.
pub fn radial_factor(d: u32, m: u32) -> Rational {
    Rational::new(BigInt::from(d), BigInt::from(d + m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::enumerate_upto;
    use crate::scalar::{cone, cr, rat, rint};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn mono(a: &[u32], b: &[u32]) -> HermitianPolynomial {
        HermitianPolynomial::monomial(mi(a), mi(b), cone()).unwrap()
    }

    #[test]
    fn gradient_pairing_examples() {
        let z1 = HermitianPolynomial::coordinate(2, 0);
        assert_eq!(gradient_pairing(&z1, &z1).unwrap(), HermitianPolynomial::constant(2, cone()));
        let one = HermitianPolynomial::constant(2, cone());
        assert!(gradient_pairing(&one, &one).unwrap().is_zero());
        let sq = HermitianPolynomial::z(&mi(&[2, 0]));
        let expected = HermitianPolynomial::monomial(mi(&[1, 0]), mi(&[1, 0]), cre(rint(4))).unwrap();
        assert_eq!(gradient_pairing(&sq, &sq).unwrap(), expected);
        assert!(gradient_pairing(&mono(&[1, 0], &[1, 0]), &z1).is_err());
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(
            HermitianPolynomial::norm_squared(3).laplacian(),
            HermitianPolynomial::constant(3, cre(rint(3)))
        );
        assert!(HermitianPolynomial::coordinate(2, 0).laplacian().is_zero());
    }

    #[test]
    fn laplacian_identity_fixed_case() {
        let c = rat(1, 4);
        let z1 = HermitianPolynomial::coordinate(2, 0);
        let shifted = HermitianPolynomial::norm_squared(2)
            .sub(&HermitianPolynomial::constant(2, cre(c.clone())))
            .unwrap();
        let lhs = shifted.mul(&z1).unwrap().mul(&z1.conj()).unwrap().laplacian();
        let mut rhs = gradient_pairing(&z1, &z1).unwrap().scale_real(&-c);
        for j in 0..2 {
            let zj = HermitianPolynomial::coordinate(2, j);
            let zf = zj.mul(&z1).unwrap();
            rhs = rhs.add(&gradient_pairing(&zf, &zf).unwrap()).unwrap();
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn integral_examples() {
        assert_eq!(mono(&[1, 0], &[1, 0]).sphere_integral(), cre(rat(1, 2)));
        assert_eq!(mono(&[1, 0], &[0, 1]).sphere_integral(), czero());
        assert_eq!(HermitianPolynomial::constant(2, cone()).sphere_integral(), cone());
        assert_eq!(HermitianPolynomial::constant(3, cone()).ball_integral(), cone());
        assert_eq!(mono(&[1, 0], &[1, 0]).ball_integral(), cre(rat(1, 3)));
        // ⟨∇z^(1,0), ∇z^(1,1)⟩·z_2 = z̄_2 z_2
        let g = gradient_pairing(&HermitianPolynomial::z(&mi(&[1, 0])), &HermitianPolynomial::z(&mi(&[1, 1]))).unwrap();
        let h = g.mul(&HermitianPolynomial::coordinate(2, 1)).unwrap();
        assert_eq!(h, mono(&[0, 1], &[0, 1]));
        assert_eq!(h.ball_integral(), cre(rat(1, 3)));
    }

    // Polar coordinates: ∫_B h dV = 2d ∫_0^1 r^{2d−1} ∫_S h(rζ) dσ dr, and for
    // a monomial of bidegree (m, m) the radial part integrates to d/(d+m).
    #[test]
    fn polar_consistency() {
        for d in 1..=3usize {
            for a in enumerate_upto(d, 4) {
                let h = HermitianPolynomial::monomial(a.clone(), a.clone(), cone()).unwrap();
                let radial = radial_factor(d as u32, a.order());
                assert_eq!(h.ball_integral(), h.sphere_integral().scale(radial));
            }
        }
    }

    #[test]
    fn realness_and_conj() {
        let mut h = mono(&[1, 0], &[0, 1]);
        assert!(!h.is_real());
        h.add_term(mi(&[0, 1]), mi(&[1, 0]), cone());
        assert!(h.is_real());
        let c = HermitianPolynomial::monomial(mi(&[1, 0]), mi(&[0, 0]), cr(rint(1), rint(2))).unwrap();
        assert_eq!(c.conj().coeff(&mi(&[0, 0]), &mi(&[1, 0])), cr(rint(1), rint(-2)));
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let a = mono(&[1], &[0]);
        assert!(a.sub(&a).unwrap().is_zero());
        assert_eq!(a.scale(&czero()).len(), 0);
    }

    #[test]
    fn compiled_matches_exact() {
        let mut h = mono(&[2, 1], &[0, 1]);
        h.add_term(mi(&[0, 0]), mi(&[1, 0]), cr(rat(1, 3), rat(-2, 5)));
        let z = [cr(rat(1, 3), rat(1, 4)), cr(rat(-1, 2), rat(1, 5))];
        let exact = c_to_f64(&h.eval_exact(&z).unwrap());
        let zf: Vec<Complex64> = z.iter().map(c_to_f64).collect();
        let approx = h.compile().eval(&zf);
        assert!((exact - approx).norm() < 1e-14);
    }

    #[test]
    fn dilation() {
        let h = mono(&[1, 0], &[1, 0]);
        assert_eq!(h.dilate(&rat(1, 2)).coeff(&mi(&[1, 0]), &mi(&[1, 0])), cre(rat(1, 4)));
    }
}
