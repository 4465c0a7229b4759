//! Exact complex-rational scalars and their wire format.
//!
//! Rationals cross the wire as `"p/q"` strings (always with a denominator);
//! inputs also accept bare integers and finite decimals such as `"0.25"`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type ComplexRational = num_complex::Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn cre(re: Rational) -> ComplexRational {
    ComplexRational::new(re, Rational::zero())
}

pub fn cr(re: Rational, im: Rational) -> ComplexRational {
    ComplexRational::new(re, im)
}

pub fn czero() -> ComplexRational {
    ComplexRational::zero()
}

pub fn cone() -> ComplexRational {
    ComplexRational::one()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn c_to_f64(z: &ComplexRational) -> Complex64 {
    Complex64::new(to_f64(&z.re), to_f64(&z.im))
}

/// `|z|²` as an exact rational.
pub fn norm_sqr(z: &ComplexRational) -> Rational {
    &z.re * &z.re + &z.im * &z.im
}

pub fn fmt_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let ip_digits = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit())
            || !ip_digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let digits = format!("{ip_digits}{fp}");
        let n: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?
        };
        let d = BigInt::from(10).pow(fp.len() as u32);
        let q = Rational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = t
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(Rational::from_integer(n))
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// A rational in `"p/q"` form, serde-friendly.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rational);

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => parse_rational(&s)
                .map(Exact)
                .map_err(serde::de::Error::custom),
            Raw::I(i) => Ok(Exact(rint(i))),
        }
    }
}

/// A complex rational on the wire: `{"re": "p/q", "im": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactComplex {
    pub re: Exact,
    #[serde(default = "zero_exact")]
    pub im: Exact,
}

fn zero_exact() -> Exact {
    Exact(Rational::zero())
}

impl From<&ComplexRational> for ExactComplex {
    fn from(z: &ComplexRational) -> Self {
        ExactComplex {
            re: Exact(z.re.clone()),
            im: Exact(z.im.clone()),
        }
    }
}

impl From<ExactComplex> for ComplexRational {
    fn from(z: ExactComplex) -> Self {
        cr(z.re.0, z.im.0)
    }
}

/// Complex coordinate input: either `"p/q"` (real) or `["re", "im"]`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ComplexInput {
    Real(Exact),
    Pair([Exact; 2]),
    Object(ExactComplex),
}

impl ComplexInput {
    pub fn value(&self) -> ComplexRational {
        match self {
            ComplexInput::Real(r) => cre(r.0.clone()),
            ComplexInput::Pair([re, im]) => cr(re.0.clone(), im.0.clone()),
            ComplexInput::Object(z) => z.clone().into(),
        }
    }

    pub fn from_value(z: &ComplexRational) -> Self {
        ComplexInput::Pair([Exact(z.re.clone()), Exact(z.im.clone())])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), rint(-2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn format_always_has_denominator() {
        assert_eq!(fmt_rational(&rint(0)), "0/1");
        assert_eq!(fmt_rational(&rat(-6, 4)), "-3/2");
    }

    #[test]
    fn perfect_squares() {
        assert_eq!(rational_sqrt(&rat(9, 16)), Some(rat(3, 4)));
        assert_eq!(rational_sqrt(&rat(1, 2)), None);
        assert_eq!(rational_sqrt(&rat(-1, 4)), None);
    }

    #[test]
    fn complex_input_forms() {
        let a: ComplexInput = serde_json::from_str(r#""1/2""#).unwrap();
        let b: ComplexInput = serde_json::from_str(r#"["0", "3/5"]"#).unwrap();
        let c: ComplexInput = serde_json::from_str(r#"{"re": "1", "im": "-1"}"#).unwrap();
        assert_eq!(a.value(), cre(rat(1, 2)));
        assert_eq!(b.value(), cr(rint(0), rat(3, 5)));
        assert_eq!(c.value(), cr(rint(1), rint(-1)));
    }
}
