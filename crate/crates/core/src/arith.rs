//! Exact coefficient arithmetic: rationals and polynomials in `h` over them.
//!
//! The coefficient ring of every word algebra in this crate is `Q[h]`, where
//! `h` is a formal variable that acts as multiplication by `1 - q` under
//! evaluation. Polynomials are stored densely since degrees never exceed the
//! weight being studied.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"0.3"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse {
        position: 0,
        message: format!("invalid rational `{text}`"),
    };
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse {
                position: 0,
                message: format!("zero denominator in `{text}`"),
            });
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = match whole {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = Rational::new(whole.abs() * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Values that q-series can be evaluated in: `f64`, `Complex64`, or exact
/// rationals.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    /// Absolute value, rounded to `f64`.
    fn magnitude(&self) -> f64;

    /// The value as a real number, if it is one.
    fn as_real(&self) -> Option<f64>;

    fn from_usize(n: usize) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn powi(&self, mut exp: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn as_real(&self) -> Option<f64> {
        Some(*self)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(f64::from_rational(r), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn as_real(&self) -> Option<f64> {
        (self.im == 0.0).then_some(self.re)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn as_real(&self) -> Option<f64> {
        self.to_f64()
    }
}

/// A polynomial in `h` with rational coefficients, `coeffs[i]` multiplying `h^i`.
///
/// Trailing zeros are always stripped, so the zero polynomial has no
/// coefficients and structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HPoly {
    coeffs: Vec<Rational>,
}

impl HPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The variable `h` itself.
    pub fn hbar() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(int(c))
    }

    /// `c * h^degree`.
    pub fn monomial(c: Rational, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = Self { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> Rational {
        self.coeffs.get(degree).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero `(degree, coefficient)` pairs in ascending degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `h^shift`.
    pub fn shift(&self, shift: usize) -> Self {
        if self.is_zero() || shift == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn add_scaled(&mut self, other: &HPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * c;
        }
        self.normalize();
    }

    /// Evaluates at `h = value` by Horner's rule.
    pub fn eval<T: Scalar>(&self, value: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * value.clone() + T::from_rational(c))
    }

    pub fn parse(text: &str) -> Result<Self> {
        crate::parse::parse_hpoly(text)
    }
}

impl AddAssign<&HPoly> for HPoly {
    fn add_assign(&mut self, other: &HPoly) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        self.normalize();
    }
}

impl SubAssign<&HPoly> for HPoly {
    fn sub_assign(&mut self, other: &HPoly) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        self.normalize();
    }
}

impl Add for &HPoly {
    type Output = HPoly;
    fn add(self, other: &HPoly) -> HPoly {
        let mut out = self.clone();
        out += other;
        out
    }
}

impl Sub for &HPoly {
    type Output = HPoly;
    fn sub(self, other: &HPoly) -> HPoly {
        let mut out = self.clone();
        out -= other;
        out
    }
}

impl Neg for &HPoly {
    type Output = HPoly;
    fn neg(self) -> HPoly {
        HPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &HPoly {
    type Output = HPoly;
    fn mul(self, other: &HPoly) -> HPoly {
        if self.is_zero() || other.is_zero() {
            return HPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        HPoly::from_coeffs(coeffs)
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.terms() {
            let negative = c.is_negative();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            write_scaled_hbar(f, &mag, deg)?;
        }
        Ok(())
    }
}

/// Writes `mag * h^deg` without a sign, e.g. `3/4*h^2`, `h`, `2`.
pub(crate) fn write_scaled_hbar(f: &mut impl fmt::Write, mag: &Rational, deg: usize) -> fmt::Result {
    let unit = mag.is_one();
    match deg {
        0 => write!(f, "{mag}"),
        _ => {
            if !unit {
                write!(f, "{mag}*")?;
            }
            if deg == 1 {
                write!(f, "h")
            } else {
                write!(f, "h^{deg}")
            }
        }
    }
}
