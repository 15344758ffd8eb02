//! Coefficient scalars.
//!
//! Two concrete scalar types back every series: [`C64`] for the norm and
//! inequality suites, and [`QComplex`] (complex numbers with arbitrary
//! precision rational parts) for identities that must hold with zero
//! residual.

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type C64 = Complex<f64>;
pub type Rational = BigRational;
pub type QComplex = Complex<BigRational>;

/// Arithmetic mode of a coefficient sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Float,
    Rational,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Float => "float",
            Mode::Rational => "rational",
        }
    }
}

impl core::str::FromStr for Mode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "float" => Ok(Mode::Float),
            "rational" => Ok(Mode::Rational),
            other => Err(crate::Error::UnknownMode(other.into())),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    const MODE: Mode;

    fn from_int(n: i64) -> Self;

    /// Lifts a float complex number. Exact for rationals: every finite
    /// binary64 value is a dyadic rational.
    fn from_c64(z: C64) -> Self;

    fn to_c64(&self) -> C64;

    fn conj(&self) -> Self;

    /// `|x|²` rounded to `f64`.
    fn abs_sqr(&self) -> f64;

    fn is_finite(&self) -> bool;

    fn abs(&self) -> f64 {
        libm::sqrt(self.abs_sqr())
    }
}

impl Scalar for C64 {
    const MODE: Mode = Mode::Float;

    fn from_int(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }

    fn from_c64(z: C64) -> Self {
        z
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn abs_sqr(&self) -> f64 {
        self.norm_sqr()
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn abs(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for QComplex {
    const MODE: Mode = Mode::Rational;

    fn from_int(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    fn from_c64(z: C64) -> Self {
        Complex::new(rational_from_f64(z.re), rational_from_f64(z.im))
    }

    fn to_c64(&self) -> C64 {
        C64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn abs_sqr(&self) -> f64 {
        rational_to_f64(&(&self.re * &self.re + &self.im * &self.im))
    }

    fn is_finite(&self) -> bool {
        true
    }
}

/// Exact conversion of a finite float; non-finite input maps to zero.
pub fn rational_from_f64(x: f64) -> Rational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, crate::Error> {
    let bad = || crate::Error::BadRational(s.into());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// Formats as `"p/q"` in lowest terms (always with a denominator).
pub fn format_rational(q: &Rational) -> alloc::string::String {
    alloc::format!("{}/{}", q.numer(), q.denom())
}

/// `(lo+1)(lo+2)…(hi)` as a scalar, i.e. `hi!/lo!`. Built one factor at a
/// time so float mode never forms a huge intermediate factorial.
pub fn rising_ratio<S: Scalar>(lo: usize, hi: usize) -> S {
    let mut acc = S::one();
    for m in lo + 1..=hi {
        acc = acc * S::from_int(m as i64);
    }
    acc
}

/// `lo!/hi!` for `lo ≤ hi`, accumulated as a product of reciprocals.
pub fn falling_reciprocal<S: Scalar>(lo: usize, hi: usize) -> S {
    let mut acc = S::one();
    for m in lo + 1..=hi {
        acc = acc / S::from_int(m as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip_through_text() {
        let q = BigRational::new(BigInt::from(-6), BigInt::from(8));
        let s = format_rational(&q);
        assert_eq!(s, "-3/4");
        assert_eq!(parse_rational(&s).unwrap(), q);
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn float_lift_is_exact() {
        let z = C64::new(0.1, -1.0e-300);
        let q = QComplex::from_c64(z);
        assert_eq!(q.to_c64(), z);
    }

    #[test]
    fn factorial_ratios() {
        let r: QComplex = rising_ratio(2, 5);
        assert_eq!(r, QComplex::from_int(60));
        let f: QComplex = falling_reciprocal(3, 5);
        assert_eq!(f * QComplex::from_int(20), QComplex::one());
        let big: C64 = falling_reciprocal(1000, 1008);
        assert!(big.re > 0.0 && big.re.is_finite());
    }
}
