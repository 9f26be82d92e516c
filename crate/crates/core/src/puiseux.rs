//! Truncated Puiseux series with exact coefficient arithmetic.
//!
//! A series is a finite list of terms `c · t^e` with strictly increasing
//! rational exponents, together with a *cutoff*: the series is known exactly
//! below the cutoff and unknown at or above it. A cutoff of `Infinite` means
//! the series is exact (a Puiseux polynomial). Arithmetic propagates cutoffs
//! pessimistically, so a result's stated precision is always trustworthy.
//!
//! The coefficient type is generic over [`Coeff`]; the crate mostly uses
//! Gaussian rationals ([`ExactComplex`]), but quotient fields of univariate
//! polynomials are plugged in for ball-image computations.
//!
//! Valuations (least exponents) come in three flavours, because truncation
//! makes "is this zero?" subtle: a series can be exactly zero, provably
//! nonzero with a known valuation, or *zero modulo precision* — no nonzero
//! term is visible below the cutoff, and no claim can be certified. The
//! [`Valuation`] enum keeps the three cases apart so callers must decide
//! explicitly how to handle the uncertified one.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{rat_int, rat_to_string, ExactComplex, Rat};

/// Default working precision: series produced by parsing or long division
/// keep this many orders of `t` beyond their leading exponent unless told
/// otherwise.
pub const DEFAULT_PRECISION: i64 = 24;

/// Coefficient field abstraction: exact field arithmetic with decidable
/// equality to zero.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse; fails only on zero.
    fn inv(&self) -> Result<Self>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Coeff for ExactComplex {
    fn zero() -> Self {
        ExactComplex::zero()
    }
    fn one() -> Self {
        ExactComplex::one()
    }
    fn is_zero(&self) -> bool {
        ExactComplex::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        ExactComplex::add(self, other)
    }
    fn neg(&self) -> Self {
        ExactComplex::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        ExactComplex::mul(self, other)
    }
    fn inv(&self) -> Result<Self> {
        ExactComplex::inv(self)
    }
}

/// Upper end of the known exponent range of a series.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cutoff {
    /// Terms with exponent `< c` are known; nothing is known from `c` on.
    Finite(Rat),
    /// The series is exact.
    Infinite,
}

impl Cutoff {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Cutoff::Infinite)
    }

    pub fn min(self, other: Cutoff) -> Cutoff {
        match (self, other) {
            (Cutoff::Infinite, c) | (c, Cutoff::Infinite) => c,
            (Cutoff::Finite(a), Cutoff::Finite(b)) => Cutoff::Finite(a.min(b)),
        }
    }

    /// Shift a finite cutoff by a rational amount; `Infinite` is absorbing.
    pub fn shift(&self, by: &Rat) -> Cutoff {
        match self {
            Cutoff::Finite(c) => Cutoff::Finite(c + by),
            Cutoff::Infinite => Cutoff::Infinite,
        }
    }

    /// True when an exponent lies strictly below the cutoff (i.e. the
    /// coefficient at that exponent is known).
    pub fn covers(&self, exp: &Rat) -> bool {
        match self {
            Cutoff::Finite(c) => exp < c,
            Cutoff::Infinite => true,
        }
    }
}

impl PartialOrd for Cutoff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cutoff {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cutoff::Infinite, Cutoff::Infinite) => Ordering::Equal,
            (Cutoff::Infinite, _) => Ordering::Greater,
            (_, Cutoff::Infinite) => Ordering::Less,
            (Cutoff::Finite(a), Cutoff::Finite(b)) => a.cmp(b),
        }
    }
}

/// One term `coef · t^exp`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<C> {
    pub exp: Rat,
    pub coef: C,
}

/// Valuation (least exponent with nonzero coefficient) of a truncated series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    /// The least exponent is known exactly.
    Finite(Rat),
    /// The series is exactly zero.
    Infinite,
    /// No nonzero term below the cutoff: the valuation is `>= cutoff`, but
    /// whether the series is zero cannot be decided at this precision.
    ZeroModPrecision(Rat),
}

impl Valuation {
    /// Best certified lower bound, or `None` for an exactly zero series.
    pub fn lower_bound(&self) -> Option<Rat> {
        match self {
            Valuation::Finite(v) => Some(v.clone()),
            Valuation::ZeroModPrecision(c) => Some(c.clone()),
            Valuation::Infinite => None,
        }
    }

    /// True when the valuation is certainly `>= bound`.
    pub fn certainly_at_least(&self, bound: &Rat) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::ZeroModPrecision(c) => c >= bound,
            Valuation::Infinite => true,
        }
    }

    /// Extract a finite valuation. Exact zero maps to the supplied error;
    /// zero-mod-precision always maps to a precision failure, because no
    /// finite answer can be certified.
    pub fn finite_or(self, if_exact_zero: Error, context: &str) -> Result<Rat> {
        match self {
            Valuation::Finite(v) => Ok(v),
            Valuation::Infinite => Err(if_exact_zero),
            Valuation::ZeroModPrecision(c) => Err(Error::PrecisionExhausted(format!(
                "{context}: series is zero modulo t^{}, valuation unknown",
                rat_to_string(&c)
            ))),
        }
    }
}

/// Truncated series over the coefficient field `C`.
///
/// Invariants (maintained by every constructor and operation):
/// - terms are sorted by strictly increasing exponent;
/// - no term has a zero coefficient;
/// - every term exponent lies strictly below the cutoff;
/// - `ram` is the least common multiple of the exponent denominators of all
///   terms and of a finite cutoff (so all exponents lie in `(1/ram)·ℤ`).
#[derive(Debug, Clone, PartialEq)]
pub struct Series<C> {
    terms: Vec<Term<C>>,
    cutoff: Cutoff,
    ram: u64,
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a.max(b).max(1);
    }
    a / gcd_u64(a, b) * b
}

fn denom_u64(r: &Rat) -> u64 {
    r.denom()
        .to_u64()
        .expect("exponent denominator fits in u64")
}

impl<C: Coeff> Series<C> {
    /// The exact zero series.
    pub fn zero() -> Self {
        Series {
            terms: Vec::new(),
            cutoff: Cutoff::Infinite,
            ram: 1,
        }
    }

    /// An exact constant.
    pub fn constant(c: C) -> Self {
        Series::from_terms_exact(vec![Term {
            exp: Rat::zero(),
            coef: c,
        }])
    }

    pub fn one() -> Self {
        Series::constant(C::one())
    }

    /// The exact monomial `coef · t^exp`.
    pub fn monomial(exp: Rat, coef: C) -> Self {
        Series::from_terms_exact(vec![Term { exp, coef }])
    }

    /// The exact monomial `t^exp`.
    pub fn t_pow(exp: Rat) -> Self {
        Series::monomial(exp, C::one())
    }

    /// Build an exact series from unsorted terms (duplicates are summed).
    pub fn from_terms_exact(terms: Vec<Term<C>>) -> Self {
        Series::from_terms(terms, Cutoff::Infinite)
    }

    /// Build a series from unsorted terms and a cutoff. Terms at or above a
    /// finite cutoff are discarded; duplicates are summed; zero coefficients
    /// are dropped.
    pub fn from_terms(terms: Vec<Term<C>>, cutoff: Cutoff) -> Self {
        let mut s = Series {
            terms,
            cutoff,
            ram: 1,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| a.exp.cmp(&b.exp));
        let mut merged: Vec<Term<C>> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if !self.cutoff.covers(&t.exp) {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.exp == t.exp => {
                    last.coef = last.coef.add(&t.coef);
                }
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.coef.is_zero());
        self.terms = merged;
        let mut ram = 1u64;
        for t in &self.terms {
            ram = lcm_u64(ram, denom_u64(&t.exp));
        }
        if let Cutoff::Finite(c) = &self.cutoff {
            ram = lcm_u64(ram, denom_u64(c));
        }
        self.ram = ram;
    }

    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    pub fn cutoff(&self) -> &Cutoff {
        &self.cutoff
    }

    /// Ramification index: all exponents lie in `(1/ram)·ℤ`.
    pub fn ram(&self) -> u64 {
        self.ram
    }

    pub fn is_exact(&self) -> bool {
        self.cutoff.is_infinite()
    }

    /// True only for the *exactly* zero series (no terms, infinite cutoff).
    pub fn is_exactly_zero(&self) -> bool {
        self.terms.is_empty() && self.cutoff.is_infinite()
    }

    pub fn val(&self) -> Valuation {
        match (self.terms.first(), &self.cutoff) {
            (Some(t), _) => Valuation::Finite(t.exp.clone()),
            (None, Cutoff::Infinite) => Valuation::Infinite,
            (None, Cutoff::Finite(c)) => Valuation::ZeroModPrecision(c.clone()),
        }
    }

    /// Coefficient at a given exponent: `None` when the exponent is not
    /// covered by the cutoff (unknown), `Some(0)` when covered but absent.
    pub fn coeff_at(&self, exp: &Rat) -> Option<C> {
        if !self.cutoff.covers(exp) {
            return None;
        }
        Some(
            self.terms
                .iter()
                .find(|t| &t.exp == exp)
                .map(|t| t.coef.clone())
                .unwrap_or_else(C::zero),
        )
    }

    /// Restrict the known range to exponents below `cutoff` (no-op if the
    /// series is already coarser).
    pub fn truncated(&self, cutoff: Cutoff) -> Self {
        Series::from_terms(self.terms.clone(), self.cutoff.clone().min(cutoff))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Series::from_terms(terms, self.cutoff.clone().min(other.cutoff.clone()))
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exp: t.exp.clone(),
                coef: t.coef.neg(),
            })
            .collect();
        Series {
            terms,
            cutoff: self.cutoff.clone(),
            ram: self.ram,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiply by a scalar.
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            // The unknown tail is also annihilated, so this is exact.
            return Series::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exp: t.exp.clone(),
                coef: t.coef.mul(c),
            })
            .collect();
        Series::from_terms(terms, self.cutoff.clone())
    }

    /// Multiply by `t^exp`.
    pub fn shift(&self, exp: &Rat) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                exp: &t.exp + exp,
                coef: t.coef.clone(),
            })
            .collect();
        Series::from_terms(terms, self.cutoff.shift(exp))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exactly_zero() || other.is_exactly_zero() {
            return Series::zero();
        }
        // Error analysis: with a = A + O(t^ca) and b = B + O(t^cb),
        // ab = AB + O(t^{v(a)+cb}) + O(t^{v(b)+ca}); the certified lower
        // bounds on v(a), v(b) are the leading exponents (or the cutoffs
        // for series with no visible terms).
        let lb = |s: &Self| s.val().lower_bound().expect("nonzero by the guard above");
        let mut cutoff = Cutoff::Infinite;
        if let Cutoff::Finite(cb) = &other.cutoff {
            cutoff = cutoff.min(Cutoff::Finite(lb(self) + cb));
        }
        if let Cutoff::Finite(ca) = &self.cutoff {
            cutoff = cutoff.min(Cutoff::Finite(lb(other) + ca));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term {
                    exp: &a.exp + &b.exp,
                    coef: a.coef.mul(&b.coef),
                });
            }
        }
        Series::from_terms(terms, cutoff)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Series::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse, computed by long division.
    ///
    /// `window` bounds the *relative* precision of the result (number of
    /// orders of `t` beyond the leading exponent) when the expansion does
    /// not terminate. If the division terminates exactly the tighter exact
    /// answer is kept — in particular inverses of monomials stay exact.
    pub fn invert(&self, window: &Rat) -> Result<Self> {
        let v0 = self.val().finite_or(
            Error::DivisionByZero("inverse of the zero series".into()),
            "inverse",
        )?;
        let c0 = self.terms[0].coef.clone();
        let c0_inv = c0.inv()?;
        // Relative precision available from the operand, capped by the window.
        let rel_target = match &self.cutoff {
            Cutoff::Finite(c) => window.clone().min(c - &v0),
            Cutoff::Infinite => window.clone(),
        };
        if rel_target <= Rat::zero() {
            return Err(Error::PrecisionExhausted(
                "inverse: no relative precision available".into(),
            ));
        }
        // Long division of 1 by the known part. Remainder exponents live in
        // the lattice (1/L)·ℤ generated by the operand's exponents, so each
        // step strictly increases the remainder valuation by at least 1/L
        // and the loop terminates.
        let mut quotient: Vec<Term<C>> = Vec::new();
        let mut remainder: Series<C> = Series::one();
        let mut terminated_exactly = false;
        loop {
            let Some(r0) = remainder.terms.first().cloned() else {
                terminated_exactly = true;
                break;
            };
            // The quotient term for remainder exponent e sits at relative
            // offset e from the quotient's leading exponent -v0; stop once
            // that offset reaches the window.
            if r0.exp >= rel_target {
                break;
            }
            let q_exp = &r0.exp - &v0;
            let q_coef = r0.coef.mul(&c0_inv);
            let q_term = Series::monomial(q_exp.clone(), q_coef.clone());
            remainder = remainder.sub(&q_term.mul(&Series {
                terms: self.terms.clone(),
                cutoff: Cutoff::Infinite,
                ram: self.ram,
            }));
            quotient.push(Term {
                exp: q_exp,
                coef: q_coef,
            });
        }
        let cutoff = match (&self.cutoff, terminated_exactly) {
            // 1/(A + O(t^c)) = 1/A + O(t^{c - 2 v0}).
            (Cutoff::Finite(c), _) => Cutoff::Finite(c - &v0 - &v0),
            (Cutoff::Infinite, true) => Cutoff::Infinite,
            (Cutoff::Infinite, false) => Cutoff::Finite(-&v0 + &rel_target),
        };
        Ok(Series::from_terms(quotient, cutoff))
    }

    /// Quotient of two series; `window` as in [`Series::invert`].
    pub fn divide(&self, den: &Self, window: &Rat) -> Result<Self> {
        Ok(self.mul(&den.invert(window)?))
    }

    /// Term-by-term long division of `self` by `den`.
    ///
    /// Quotient terms are passed to `visit` in strictly ascending exponent
    /// order; returning `false` stops the division early, making the
    /// result `None`. Otherwise the division runs to its end: either the
    /// quotient terminates exactly, or the available relative precision —
    /// `window`, tightened by the operands' cutoffs — is used up.
    ///
    /// Unlike [`Series::divide`], which materializes every term up to the
    /// window, this stops computing the moment the caller has seen enough.
    /// Over expensive coefficient rings whose elements grow with each step
    /// that is a substantial saving.
    pub fn divide_with(
        &self,
        den: &Self,
        window: &Rat,
        mut visit: impl FnMut(Term<C>) -> bool,
    ) -> Result<Option<QuotientEnd>> {
        let vd = den.val().finite_or(
            Error::DivisionByZero("division by the zero series".into()),
            "division",
        )?;
        let exact_possible = self.cutoff.is_infinite() && den.cutoff.is_infinite();
        let Some(lead) = self.terms.first() else {
            return Ok(Some(match &self.cutoff {
                Cutoff::Infinite => QuotientEnd::Exact,
                Cutoff::Finite(c) => QuotientEnd::Window(c - &vd),
            }));
        };
        let vn = lead.exp.clone();
        let mut rel_target = window.clone();
        if let Cutoff::Finite(c) = &self.cutoff {
            rel_target = rel_target.min(c - &vn);
        }
        if let Cutoff::Finite(c) = &den.cutoff {
            rel_target = rel_target.min(c - &vd);
        }
        if rel_target <= Rat::zero() {
            return Err(Error::PrecisionExhausted(
                "division: no relative precision available".into(),
            ));
        }
        // Quotient terms with exponent below this bound are all visited;
        // nothing is known from the bound on.
        let boundary = &vn - &vd + &rel_target;
        let c0_inv = den.terms[0].coef.inv()?;
        let den_exact = Series {
            terms: den.terms.clone(),
            cutoff: Cutoff::Infinite,
            ram: den.ram,
        };
        let mut remainder = Series {
            terms: self.terms.clone(),
            cutoff: Cutoff::Infinite,
            ram: self.ram,
        };
        loop {
            let Some(r0) = remainder.terms.first().cloned() else {
                return Ok(Some(if exact_possible {
                    QuotientEnd::Exact
                } else {
                    QuotientEnd::Window(boundary)
                }));
            };
            if &r0.exp - &vn >= rel_target {
                return Ok(Some(QuotientEnd::Window(boundary)));
            }
            let q_exp = &r0.exp - &vd;
            let q_coef = r0.coef.mul(&c0_inv);
            remainder =
                remainder.sub(&Series::monomial(q_exp.clone(), q_coef.clone()).mul(&den_exact));
            if !visit(Term {
                exp: q_exp,
                coef: q_coef,
            }) {
                return Ok(None);
            }
        }
    }
}

/// How an incremental division ([`Series::divide_with`]) ended when the
/// caller did not stop it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientEnd {
    /// The remainder vanished and both operands were exact: the visited
    /// terms form the exact quotient.
    Exact,
    /// The relative precision ran out. All quotient terms below the given
    /// absolute exponent were visited; nothing is known from there on.
    Window(Rat),
}

/// Truncated Puiseux series with Gaussian-rational coefficients: the working
/// model of the field of completed formal Puiseux series.
pub type PuiseuxSeries = Series<ExactComplex>;

impl PuiseuxSeries {
    /// Deterministic total order on series data (exponent, then coefficient
    /// lexicographically, then cutoff). Used to fix enumeration orders; it
    /// has no analytic meaning.
    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        let n = self.terms.len().min(other.terms.len());
        for i in 0..n {
            let a = &self.terms[i];
            let b = &other.terms[i];
            let ord = a.exp.cmp(&b.exp).then_with(|| a.coef.cmp_lex(&b.coef));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms
            .len()
            .cmp(&other.terms.len())
            .then_with(|| self.cutoff.cmp(&other.cutoff))
    }

    /// Numerically evaluate at `t = t0`, on the branch `t^{1/ram} =
    /// |t0|^{1/ram} · exp(i(arg t0 + 2π·branch)/ram)`.
    ///
    /// Branches are counted modulo `ram`; for an unramified series the
    /// argument is irrelevant.
    pub fn evaluate_at(&self, t0: Complex64, branch: u32) -> Complex64 {
        let ram = self.ram as f64;
        let modulus = t0.norm().powf(1.0 / ram);
        let angle = (t0.arg() + std::f64::consts::TAU * f64::from(branch)) / ram;
        let root = Complex64::from_polar(modulus, angle);
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let k = (&t.exp * rat_int(self.ram as i64))
                .to_integer()
                .to_i32()
                .expect("scaled exponent fits in i32");
            acc += t.coef.to_c64() * root.powi(k);
        }
        acc
    }
}

impl fmt::Display for PuiseuxSeries {
    /// Canonical printer; output re-parses to an identical series.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn t_part(exp: &Rat) -> String {
            if exp == &rat_int(1) {
                "t".to_string()
            } else {
                format!("t^{}", rat_to_string(exp))
            }
        }
        // (sign, magnitude) pair for one term; the sign is split off only
        // for purely real coefficients.
        fn render(term: &Term<ExactComplex>) -> (bool, String) {
            let (neg, coef) = if term.coef.is_real() && term.coef.re.is_negative() {
                (true, term.coef.neg())
            } else {
                (false, term.coef.clone())
            };
            let body = if term.exp.is_zero() {
                format!("{coef}")
            } else if coef == ExactComplex::one() {
                t_part(&term.exp)
            } else {
                format!("{coef}*{}", t_part(&term.exp))
            };
            (neg, body)
        }

        let mut pieces: Vec<(bool, String)> = self.terms.iter().map(render).collect();
        if let Cutoff::Finite(c) = &self.cutoff {
            pieces.push((false, format!("O({})", t_part(c))));
        }
        if pieces.is_empty() {
            return write!(f, "0");
        }
        for (i, (neg, body)) in pieces.iter().enumerate() {
            if i == 0 {
                write!(f, "{}{}", if *neg { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if *neg { "-" } else { "+" }, body)?;
            }
        }
        Ok(())
    }
}

/// Convenience: the exact monomial `t^{p/q}` as a Puiseux series.
pub fn t_rat(p: i64, q: i64) -> PuiseuxSeries {
    PuiseuxSeries::t_pow(Rat::new(BigInt::from(p), BigInt::from(q)))
}

/// Convenience: an exact rational constant as a Puiseux series.
pub fn series_int(n: i64) -> PuiseuxSeries {
    PuiseuxSeries::constant(ExactComplex::from_int(n))
}
