//! Coefficient fields for invariant forms.
//!
//! Two backends implement [`Scalar`]: [`GaussRat`], exact Gaussian rationals
//! `a + b i` with arbitrary-precision `a, b`, and [`CFloat`], a pair of `f64`
//! compared against an absolute tolerance.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which coefficient field a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Parse(format!("unknown backend `{other}`"))),
        }
    }
}

/// A complex coefficient field.
///
/// Zero coefficients are pruned from forms using [`Scalar::is_zero`], which is
/// an exact test on both backends. Decisions that must tolerate rounding use
/// [`Scalar::is_negligible`] with an explicit tolerance; the exact backend
/// ignores the tolerance.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;
    /// Tolerance used when the caller does not configure one.
    const DEFAULT_EPS: f64;

    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn from_int(n: i64) -> Self;
    /// `num / den`. Panics if `den == 0`.
    fn from_frac(num: i64, den: i64) -> Self;
    fn from_parts(re: Self, im: Self) -> Self {
        re + Self::i() * im
    }
    /// Exact on both backends: binary floats are rationals.
    fn from_c64(z: Complex64) -> Self;

    fn conj(&self) -> Self;
    /// Real part, as a scalar with zero imaginary part.
    fn re(&self) -> Self;
    /// Imaginary part, as a scalar with zero imaginary part.
    fn im(&self) -> Self;
    fn abs_sqr(&self) -> Self {
        self.clone() * self.conj()
    }
    fn inv(&self) -> Option<Self>;

    fn is_zero(&self) -> bool;
    fn is_negligible(&self, eps: f64) -> bool;
    /// Sign of the real part; values within `eps` of zero compare `Equal`.
    fn real_sign(&self, eps: f64) -> Ordering;
    /// Magnitude used to rank pivots during elimination.
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> Complex64;

    fn to_json_parts(&self) -> (String, String);
    fn parse_parts(re: &str, im: &str) -> Result<Self>;

    fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    fn is_one(&self) -> bool {
        (self.clone() - Self::one()).is_zero()
    }
}

/// Exact Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    /// `(a/b) + (c/d) i` from machine integers.
    pub fn from_ratios(a: i64, b: i64, c: i64, d: i64) -> Self {
        GaussRat {
            re: ratio(a, b),
            im: ratio(c, d),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr_rational(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p`, `p/q`, or a decimal such as `-1.25e-3` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("`{s}`: zero denominator")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..]
                .parse()
                .map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits == "-" || digits == "+" || digits.is_empty() {
        return Err(Error::Parse(format!("`{s}`: no digits")));
    } else {
        digits
    };
    let numer = BigInt::from_str(&digits).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Div for GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: GaussRat) -> GaussRat {
        self * rhs.inv().expect("division by zero")
    }
}

impl Scalar for GaussRat {
    const BACKEND: Backend = Backend::Exact;
    const DEFAULT_EPS: f64 = 0.0;

    fn zero() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn one() -> Self {
        GaussRat::real(BigRational::one())
    }

    fn i() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    fn from_int(n: i64) -> Self {
        GaussRat::real(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        GaussRat::real(ratio(num, den))
    }

    fn from_c64(z: Complex64) -> Self {
        let conv = |x: f64| BigRational::from_float(x).expect("finite float");
        GaussRat {
            re: conv(z.re),
            im: conv(z.im),
        }
    }

    fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn re(&self) -> Self {
        GaussRat::real(self.re.clone())
    }

    fn im(&self) -> Self {
        GaussRat::real(self.im.clone())
    }

    fn abs_sqr(&self) -> Self {
        GaussRat::real(self.norm_sqr_rational())
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr_rational();
        Some(GaussRat {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_negligible(&self, _eps: f64) -> bool {
        self.is_zero()
    }

    fn real_sign(&self, _eps: f64) -> Ordering {
        if self.re.is_zero() {
            Ordering::Equal
        } else if self.re.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn to_json_parts(&self) -> (String, String) {
        (fmt_rational(&self.re), fmt_rational(&self.im))
    }

    fn parse_parts(re: &str, im: &str) -> Result<Self> {
        Ok(GaussRat {
            re: parse_rational(re)?,
            im: parse_rational(im)?,
        })
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => f.write_str(&fmt_rational(&self.re)),
            (true, false) => {
                if self.im.is_one() {
                    f.write_str("i")
                } else if (-self.im.clone()).is_one() {
                    f.write_str("-i")
                } else {
                    write!(f, "{}i", fmt_rational(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{}{}{}i",
                    fmt_rational(&self.re),
                    sign,
                    fmt_rational(&self.im.abs())
                )
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GaussRat {
    type Err = Error;

    /// Accepts `a`, `bi`, `a+bi`, `a-bi` where `a`, `b` are rationals in
    /// `p/q` or decimal notation, and `i`, `-i` alone.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if let Some(body) = s.strip_suffix('i') {
            // find the split between real and imaginary parts: the last +/- that
            // is not at position 0 and does not follow an exponent marker
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                let c = bytes[k] as char;
                if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                    split = Some(k);
                    break;
                }
            }
            let (re_str, im_str) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("0", body),
            };
            let im_str = match im_str {
                "" | "+" => "1",
                "-" => "-1",
                other => other,
            };
            let im_str = im_str.strip_prefix('+').unwrap_or(im_str);
            return Ok(GaussRat {
                re: parse_rational(re_str)?,
                im: parse_rational(im_str)?,
            });
        }
        Ok(GaussRat::real(parse_rational(&s)?))
    }
}

/// Floating-point complex scalar.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct CFloat(pub Complex64);

impl CFloat {
    pub fn new(re: f64, im: f64) -> Self {
        CFloat(Complex64::new(re, im))
    }
}

impl Add for CFloat {
    type Output = CFloat;
    fn add(self, rhs: CFloat) -> CFloat {
        CFloat(self.0 + rhs.0)
    }
}

impl Sub for CFloat {
    type Output = CFloat;
    fn sub(self, rhs: CFloat) -> CFloat {
        CFloat(self.0 - rhs.0)
    }
}

impl Mul for CFloat {
    type Output = CFloat;
    fn mul(self, rhs: CFloat) -> CFloat {
        CFloat(self.0 * rhs.0)
    }
}

impl Neg for CFloat {
    type Output = CFloat;
    fn neg(self) -> CFloat {
        CFloat(-self.0)
    }
}

impl Div for CFloat {
    type Output = CFloat;
    fn div(self, rhs: CFloat) -> CFloat {
        CFloat(self.0 / rhs.0)
    }
}

impl Scalar for CFloat {
    const BACKEND: Backend = Backend::Float;
    const DEFAULT_EPS: f64 = 1e-12;

    fn zero() -> Self {
        CFloat::new(0.0, 0.0)
    }

    fn one() -> Self {
        CFloat::new(1.0, 0.0)
    }

    fn i() -> Self {
        CFloat::new(0.0, 1.0)
    }

    fn from_int(n: i64) -> Self {
        CFloat::new(n as f64, 0.0)
    }

    fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        CFloat::new(num as f64 / den as f64, 0.0)
    }

    fn from_c64(z: Complex64) -> Self {
        CFloat(z)
    }

    fn conj(&self) -> Self {
        CFloat(self.0.conj())
    }

    fn re(&self) -> Self {
        CFloat::new(self.0.re, 0.0)
    }

    fn im(&self) -> Self {
        CFloat::new(self.0.im, 0.0)
    }

    fn abs_sqr(&self) -> Self {
        CFloat::new(self.0.norm_sqr(), 0.0)
    }

    fn inv(&self) -> Option<Self> {
        if self.0.norm_sqr() == 0.0 {
            None
        } else {
            Some(CFloat(self.0.inv()))
        }
    }

    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    fn is_negligible(&self, eps: f64) -> bool {
        self.0.norm() <= eps
    }

    fn real_sign(&self, eps: f64) -> Ordering {
        if self.0.re.abs() <= eps {
            Ordering::Equal
        } else if self.0.re > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn magnitude(&self) -> f64 {
        self.0.norm()
    }

    fn to_c64(&self) -> Complex64 {
        self.0
    }

    fn to_json_parts(&self) -> (String, String) {
        (format!("{:?}", self.0.re), format!("{:?}", self.0.im))
    }

    fn parse_parts(re: &str, im: &str) -> Result<Self> {
        let parse = |s: &str| -> Result<f64> {
            if s.contains('/') {
                Ok(rational_to_f64(&parse_rational(s)?))
            } else {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
            }
        };
        Ok(CFloat::new(parse(re)?, parse(im)?))
    }
}

impl fmt::Display for CFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if im == 0.0 {
            write!(f, "{re}")
        } else if re == 0.0 {
            write!(f, "{im}i")
        } else if im < 0.0 {
            write!(f, "{re}-{}i", -im)
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

impl fmt::Debug for CFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Convert between backends through `Complex64` (exact values become floats,
/// floats become their exact binary rationals).
pub fn convert<A: Scalar, B: Scalar>(a: &A) -> B {
    B::from_c64(a.to_c64())
}

/// Shorthand for exact Gaussian rationals in tests and catalogs: `q(a, b)` is
/// the rational `a/b`.
pub fn q(num: i64, den: i64) -> GaussRat {
    GaussRat::from_frac(num, den)
}

/// `a + b i` with integer parts.
pub fn gi(re: i64, im: i64) -> GaussRat {
    GaussRat::from_ratios(re, 1, im, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational("-2.5e-1").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rational("12e2").unwrap(), ratio(1200, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn parses_gaussian_literals() {
        assert_eq!("1-i".parse::<GaussRat>().unwrap(), gi(1, -1));
        assert_eq!("-i".parse::<GaussRat>().unwrap(), gi(0, -1));
        assert_eq!("9/4+3/4i".parse::<GaussRat>().unwrap(), GaussRat::from_ratios(9, 4, 3, 4));
        assert_eq!("2".parse::<GaussRat>().unwrap(), gi(2, 0));
        assert_eq!("1e-1-2i".parse::<GaussRat>().unwrap(), GaussRat::from_ratios(1, 10, -2, 1));
    }

    #[test]
    fn display_round_trips() {
        for z in [gi(0, 0), gi(1, -1), GaussRat::from_ratios(-3, 4, 5, 2), gi(0, 1), gi(0, -3)] {
            let shown = z.to_string();
            assert_eq!(shown.parse::<GaussRat>().unwrap(), z, "{shown}");
        }
    }

    #[test]
    fn exact_field_ops() {
        let a = gi(1, 2);
        let b = GaussRat::from_ratios(3, 1, -1, 2);
        let prod = a.clone() * b.clone();
        assert_eq!(prod.clone() / b.clone(), a);
        assert_eq!(a.clone() * a.inv().unwrap(), GaussRat::one());
        assert!(GaussRat::zero().inv().is_none());
        assert_eq!(a.abs_sqr(), gi(5, 0));
        assert_eq!(GaussRat::i().pow(2), gi(-1, 0));
    }

    #[test]
    fn float_tolerance() {
        let z = CFloat::new(1e-13, 0.0);
        assert!(z.is_negligible(CFloat::DEFAULT_EPS));
        assert!(!z.is_zero());
        assert_eq!(z.real_sign(1e-12), Ordering::Equal);
        assert_eq!(CFloat::new(-1.0, 5.0).real_sign(1e-12), Ordering::Less);
    }

    #[test]
    fn conversion_is_exact_for_binary_fractions() {
        let z = GaussRat::from_ratios(3, 8, -5, 4);
        let f: CFloat = convert(&z);
        let back: GaussRat = convert(&f);
        assert_eq!(back, z);
    }
}
