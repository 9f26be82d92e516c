//! Dense univariate polynomials and rational functions over the Gaussian
//! rationals.
//!
//! These are the residue-field counterparts of the series-coefficient maps:
//! reduced sphere maps, tangent maps and their compositions all live here.
//! Everything is exact; [`RatFn`] doubles as a coefficient field (through
//! [`Coeff`]) and as a rational self-map of the complex projective line.

use num_complex::Complex64;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{CP1, ExactComplex};
use crate::puiseux::Coeff;

/// Polynomial with coefficients in ascending degree order.
///
/// Invariant: the coefficient vector has no trailing zeros, so the zero
/// polynomial is the empty vector and `coeffs.last()` is the leading
/// coefficient otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CPoly {
    coeffs: Vec<ExactComplex>,
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        CPoly::constant(ExactComplex::one())
    }

    pub fn constant(c: ExactComplex) -> Self {
        CPoly::from_coeffs(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn var() -> Self {
        CPoly::from_coeffs(vec![ExactComplex::zero(), ExactComplex::one()])
    }

    /// `c · z^deg`.
    pub fn monomial(deg: usize, c: ExactComplex) -> Self {
        let mut coeffs = vec![ExactComplex::zero(); deg + 1];
        coeffs[deg] = c;
        CPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<ExactComplex>) -> Self {
        while coeffs.last().is_some_and(ExactComplex::is_zero) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    /// `∏ (z - r)` over the given roots.
    pub fn from_roots(roots: &[ExactComplex]) -> Self {
        let mut p = CPoly::one();
        for r in roots {
            p = p.mul(&CPoly::from_coeffs(vec![r.neg(), ExactComplex::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[ExactComplex] {
        &self.coeffs
    }

    /// Coefficient of `z^i`, zero-padded beyond the degree.
    pub fn coeff(&self, i: usize) -> ExactComplex {
        self.coeffs.get(i).cloned().unwrap_or_else(ExactComplex::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactComplex> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        CPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        CPoly {
            coeffs: self.coeffs.iter().map(ExactComplex::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ExactComplex) -> Self {
        CPoly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return CPoly::zero();
        }
        let mut coeffs =
            vec![ExactComplex::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        CPoly::from_coeffs(coeffs)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = CPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: `self = q·den + r` with `deg r < deg den`.
    pub fn divrem(&self, den: &Self) -> Result<(Self, Self)> {
        let dd = den
            .degree()
            .ok_or_else(|| Error::DivisionByZero("polynomial division by zero".into()))?;
        let lead_inv = den.leading().unwrap().inv()?;
        let mut rem = self.clone();
        let mut q = vec![ExactComplex::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let factor = rem.leading().unwrap().mul(&lead_inv);
            let shift = dr - dd;
            q[shift] = factor.clone();
            // rem -= factor * z^shift * den
            let mut coeffs = rem.coeffs;
            for (j, b) in den.coeffs.iter().enumerate() {
                coeffs[shift + j] = coeffs[shift + j].sub(&factor.mul(b));
            }
            rem = CPoly::from_coeffs(coeffs);
        }
        Ok((CPoly::from_coeffs(q), rem))
    }

    /// Divide by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => CPoly::zero(),
            Some(lc) => self.scale(&lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Monic greatest common divisor (Euclid with monic normalization).
    pub fn gcd_monic(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("b is nonzero inside the loop");
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&ExactComplex::from_int(i as i64)))
            .collect();
        CPoly::from_coeffs(coeffs)
    }

    pub fn eval(&self, z: &ExactComplex) -> ExactComplex {
        let mut acc = ExactComplex::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    /// Synthetic division by `z - a`: returns the quotient and the remainder
    /// (which equals `self(a)`).
    pub fn divide_linear(&self, a: &ExactComplex) -> (Self, ExactComplex) {
        let mut quotient = vec![ExactComplex::zero(); self.coeffs.len().saturating_sub(1)];
        let mut carry = ExactComplex::zero();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if i == 0 {
                carry = carry.mul(a).add(c);
            } else {
                carry = carry.mul(a).add(c);
                // carry currently holds the quotient coefficient of z^{i-1}
                quotient[i - 1] = carry.clone();
            }
        }
        (CPoly::from_coeffs(quotient), carry)
    }

    /// Multiplicity of `a` as a root (0 when `self(a) != 0`).
    pub fn root_multiplicity(&self, a: &ExactComplex) -> u32 {
        let mut p = self.clone();
        let mut k = 0;
        if p.is_zero() {
            return 0;
        }
        loop {
            let (q, r) = p.divide_linear(a);
            if !r.is_zero() {
                return k;
            }
            k += 1;
            p = q;
            if p.is_zero() {
                return k;
            }
        }
    }

    /// Squarefree decomposition (Yun): pairwise coprime monic squarefree
    /// factors with their multiplicities, excluding the constant content.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let p = self.monic();
        let dp = p.derivative();
        let a = p.gcd_monic(&dp);
        let mut b = p.divrem(&a).expect("gcd divides").0;
        let mut c = dp.divrem(&a).expect("gcd divides").0;
        let mut mult = 1u32;
        while b.degree().unwrap_or(0) > 0 {
            let d = c.sub(&b.derivative());
            let factor = b.gcd_monic(&d);
            if factor.degree().unwrap_or(0) > 0 {
                out.push((factor.clone(), mult));
            }
            b = b.divrem(&factor).expect("factor divides").0;
            c = d.divrem(&factor).expect("factor divides").0;
            mult += 1;
        }
        out
    }

    /// Number of distinct complex roots: `deg p - deg gcd(p, p')`.
    pub fn distinct_root_count(&self) -> usize {
        match self.degree() {
            None | Some(0) => 0,
            Some(d) => {
                let g = self.gcd_monic(&self.derivative());
                d - g.degree().unwrap_or(0)
            }
        }
    }

    /// `z^n · self(1/z)`: coefficients reversed after padding to degree `n`.
    /// Requires `n >= deg self`.
    pub fn reverse_padded(&self, n: usize) -> Self {
        let mut coeffs = vec![ExactComplex::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[n - i] = c.clone();
        }
        CPoly::from_coeffs(coeffs)
    }

    /// Ascending-order pretty printer, e.g. `1 - 2*z + z^3`.
    pub fn display_with_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_real() && num_traits::Signed::is_negative(&c.re) {
                (true, c.neg())
            } else {
                (false, c.clone())
            };
            let body = if i == 0 {
                format!("{mag}")
            } else {
                let zp = if i == 1 {
                    var.to_string()
                } else {
                    format!("{var}^{i}")
                };
                if mag == ExactComplex::one() {
                    zp
                } else {
                    format!("{mag}*{zp}")
                }
            };
            if first {
                out.push_str(if neg { "-" } else { "" });
                first = false;
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

/// Rational function `num/den` in lowest terms with monic denominator.
///
/// Two roles: an element of the field ℚ(i)(u) (the [`Coeff`] impl), and a
/// rational self-map of the complex projective line (`apply_cp1`,
/// `compose`, `map_degree`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: CPoly,
    den: CPoly,
}

impl RatFn {
    /// Build and reduce. Fails when the denominator is the zero polynomial.
    pub fn new(num: CPoly, den: CPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero(
                "rational function with zero denominator".into(),
            ));
        }
        let g = num.gcd_monic(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (
                num.divrem(&g).expect("gcd divides").0,
                den.divrem(&g).expect("gcd divides").0,
            )
        } else {
            (num, den)
        };
        let lc_inv = den.leading().expect("nonzero").inv()?;
        let num = num.scale(&lc_inv);
        let den = den.scale(&lc_inv);
        if num.is_zero() {
            return Ok(RatFn {
                num: CPoly::zero(),
                den: CPoly::one(),
            });
        }
        Ok(RatFn { num, den })
    }

    pub fn from_poly(p: CPoly) -> Self {
        RatFn {
            num: p,
            den: CPoly::one(),
        }
    }

    pub fn constant(c: ExactComplex) -> Self {
        RatFn::from_poly(CPoly::constant(c))
    }

    /// The identity map / the generator `u` of the function field.
    pub fn var() -> Self {
        RatFn::from_poly(CPoly::var())
    }

    pub fn num(&self) -> &CPoly {
        &self.num
    }

    pub fn den(&self) -> &CPoly {
        &self.den
    }

    /// Constant value, if this function is constant (including zero).
    pub fn constant_value(&self) -> Option<ExactComplex> {
        if self.den == CPoly::one() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Degree as a self-map of the projective line.
    pub fn map_degree(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    /// Exact derivative `(n'd - nd')/d²`.
    pub fn derivative(&self) -> Self {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RatFn::new(n, self.den.mul(&self.den)).expect("denominator square is nonzero")
    }

    /// Apply to a point of the projective line.
    pub fn apply_cp1(&self, p: &CP1) -> CP1 {
        match p {
            CP1::Finite(z) => {
                let n = self.num.eval(z);
                let d = self.den.eval(z);
                if d.is_zero() {
                    // num and den share no roots, so n != 0 here.
                    CP1::Infinity
                } else {
                    CP1::Finite(n.mul(&d.inv().expect("nonzero")))
                }
            }
            CP1::Infinity => {
                let dn = self.num.degree().unwrap_or(0);
                let dd = self.den.degree().unwrap_or(0);
                match dn.cmp(&dd) {
                    std::cmp::Ordering::Greater => CP1::Infinity,
                    std::cmp::Ordering::Less => CP1::zero(),
                    std::cmp::Ordering::Equal => {
                        // den is monic, so the limit is the leading coefficient
                        // of the numerator.
                        CP1::Finite(self.num.leading().cloned().unwrap_or_else(|| {
                            // num zero means the function is identically 0.
                            ExactComplex::zero()
                        }))
                    }
                }
            }
        }
    }

    /// Composition of self-maps: `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let eval = |p: &CPoly| -> Result<RatFn> {
            let mut acc = RatFn::zero();
            for c in p.coeffs().iter().rev() {
                acc = Coeff::add(&acc.mul_rf(inner), &RatFn::constant(c.clone()));
            }
            Ok(acc)
        };
        let n = eval(&self.num)?;
        let d = eval(&self.den)?;
        if Coeff::is_zero(&d) {
            // Composing with a constant that is a pole of self.
            return Err(Error::ConstantReduction(
                "composition has identically zero denominator".into(),
            ));
        }
        RatFn::new(
            n.num.mul(&d.den),
            n.den.mul(&d.num),
        )
    }

    fn mul_rf(&self, other: &Self) -> Self {
        RatFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("product of nonzero denominators is nonzero")
    }

    /// True when the map is `c·u^k` or `c·u^-k` for some `k >= 0`.
    pub fn is_monomial_map(&self) -> bool {
        let num_mono = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        let den_mono = self.den.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
        num_mono && den_mono
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.num.eval_c64(z) / self.den.eval_c64(z)
    }

    /// Pretty printer, e.g. `(1 + u^3)/u^2`.
    pub fn display_with_var(&self, var: &str) -> String {
        let n = self.num.display_with_var(var);
        if self.den == CPoly::one() {
            return n;
        }
        let d = self.den.display_with_var(var);
        let wrap = |s: &str, p: &CPoly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s.to_string()
            }
        };
        format!("{}/{}", wrap(&n, &self.num), wrap(&d, &self.den))
    }
}

impl Coeff for RatFn {
    fn zero() -> Self {
        RatFn::from_poly(CPoly::zero())
    }
    fn one() -> Self {
        RatFn::from_poly(CPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        RatFn::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }
    fn neg(&self) -> Self {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_rf(other)
    }
    fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero(
                "inverse of the zero rational function".into(),
            ));
        }
        RatFn::new(self.den.clone(), self.num.clone())
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with_var("u"))
    }
}
