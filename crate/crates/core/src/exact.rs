//! Exact scalar arithmetic: arbitrary-precision rationals and Gaussian
//! rationals (complex numbers with rational real and imaginary parts).
//!
//! All coefficient arithmetic in this crate happens in the field ℚ(i). That
//! keeps every computation exact; floating point only enters at the very end
//! when results are evaluated numerically for cross-checks.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Build a rational from a numerator/denominator pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Build a rational from a machine integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Render a rational as `p` or `p/q` with positive denominator.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Complex number with exact rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactComplex {
    pub re: Rat,
    pub im: Rat,
}

impl ExactComplex {
    pub fn new(re: Rat, im: Rat) -> Self {
        ExactComplex { re, im }
    }

    pub fn zero() -> Self {
        ExactComplex::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        ExactComplex::new(rat_int(1), Rat::zero())
    }

    pub fn i() -> Self {
        ExactComplex::new(Rat::zero(), rat_int(1))
    }

    pub fn from_int(n: i64) -> Self {
        ExactComplex::new(rat_int(n), Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        ExactComplex::new(r, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        ExactComplex::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn sub(&self, other: &Self) -> Self {
        ExactComplex::new(&self.re - &other.re, &self.im - &other.im)
    }

    pub fn neg(&self) -> Self {
        ExactComplex::new(-self.re.clone(), -self.im.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        ExactComplex::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    /// Multiplicative inverse. Fails on zero.
    pub fn inv(&self) -> Result<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero scalar".into()));
        }
        Ok(ExactComplex::new(&self.re / &norm, -(&self.im / &norm)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = ExactComplex::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Lexicographic order on (re, im); used only to make enumeration orders
    /// deterministic, it is not compatible with the field structure.
    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// Convert to a floating-point complex number.
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for ExactComplex {
    /// Canonical textual form, re-parseable by the crate's grammar:
    /// real values print as `p` or `p/q`, others as `(a+bi)` / `(a-bi)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", rat_to_string(&self.re));
        }
        let (sign, abs_im) = if self.im.is_negative() {
            ("-", -self.im.clone())
        } else {
            ("+", self.im.clone())
        };
        write!(
            f,
            "({}{}{}i)",
            rat_to_string(&self.re),
            sign,
            rat_to_string(&abs_im)
        )
    }
}

/// A point of the complex projective line ℂ ∪ {∞}, with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CP1 {
    Finite(ExactComplex),
    Infinity,
}

impl CP1 {
    pub fn zero() -> Self {
        CP1::Finite(ExactComplex::zero())
    }

    pub fn one() -> Self {
        CP1::Finite(ExactComplex::one())
    }

    pub fn from_int(n: i64) -> Self {
        CP1::Finite(ExactComplex::from_int(n))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CP1::Infinity)
    }

    /// Deterministic ordering: finite points lexicographically, then ∞.
    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CP1::Finite(a), CP1::Finite(b)) => a.cmp_lex(b),
            (CP1::Finite(_), CP1::Infinity) => Ordering::Less,
            (CP1::Infinity, CP1::Finite(_)) => Ordering::Greater,
            (CP1::Infinity, CP1::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for CP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CP1::Finite(z) => write!(f, "{z}"),
            CP1::Infinity => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_identities() {
        let a = ExactComplex::new(rat(3, 2), rat(-1, 5));
        let b = ExactComplex::new(rat(-7, 3), rat(2, 1));
        assert_eq!(a.add(&b).sub(&b), a);
        assert_eq!(a.mul(&b), b.mul(&a));
        let inv = a.inv().unwrap();
        assert_eq!(a.mul(&inv), ExactComplex::one());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = ExactComplex::i();
        assert_eq!(i.mul(&i), ExactComplex::from_int(-1));
    }

    #[test]
    fn inverse_of_zero_fails() {
        let e = ExactComplex::zero().inv().unwrap_err();
        assert_eq!(e.code(), "DIVISION_BY_ZERO");
    }

    #[test]
    fn display_forms() {
        assert_eq!(ExactComplex::from_int(-3).to_string(), "-3");
        assert_eq!(ExactComplex::from_rat(rat(1, 2)).to_string(), "1/2");
        assert_eq!(
            ExactComplex::new(rat_int(1), rat_int(2)).to_string(),
            "(1+2i)"
        );
        assert_eq!(
            ExactComplex::new(rat_int(0), rat(-1, 3)).to_string(),
            "(0-1/3i)"
        );
        assert_eq!(CP1::Infinity.to_string(), "inf");
    }

    #[test]
    fn lex_order_is_total_and_deterministic() {
        let mut pts = vec![
            CP1::Infinity,
            CP1::from_int(1),
            CP1::Finite(ExactComplex::new(rat_int(1), rat_int(-1))),
            CP1::zero(),
        ];
        pts.sort_by(|a, b| a.cmp_lex(b));
        assert_eq!(
            pts,
            vec![
                CP1::zero(),
                CP1::Finite(ExactComplex::new(rat_int(1), rat_int(-1))),
                CP1::from_int(1),
                CP1::Infinity,
            ]
        );
    }

    #[test]
    fn to_c64_matches() {
        let z = ExactComplex::new(rat(1, 4), rat(-3, 8));
        let w = z.to_c64();
        assert_eq!(w.re, 0.25);
        assert_eq!(w.im, -0.375);
    }
}
