//! One-parameter families of rational maps: polynomials over the series
//! field, certified-coprime rational maps, images of balls, reductions,
//! tangent maps, and local degrees.
//!
//! A rational map is stored as a pair of polynomials with Puiseux-series
//! coefficients. Construction certifies coprimality through a Sylvester
//! resultant computed *without divisions*, so exact inputs give an exact
//! certificate; a resultant that is zero modulo precision is reported as
//! indeterminate rather than guessed.
//!
//! The image of a ball `B(c, rv)` is computed by substituting
//! `z = c + u·t^rv` with `u` a transcendental residue parameter: the map's
//! value becomes a series in `t` with rational-function coefficients in
//! `u`, and the image ball is read off at the first coefficient that
//! actually depends on `u`. Tangent maps are reductions of the map
//! conjugated by the chart transformations of a vertex and its image.

use num_complex::Complex64;

use crate::berkline::{PointP1L, TypeIIPoint};
use crate::cpoly::{CPoly, RatFn};
use crate::error::{Error, Result};
use crate::exact::{rat_int, rat_to_string, CP1, ExactComplex, Rat};
use crate::moebius::MoebiusL;
use crate::puiseux::{PuiseuxSeries, QuotientEnd, Series, Term, Valuation, DEFAULT_PRECISION};

/// Polynomial in one variable with Puiseux-series coefficients, ascending
/// degree order, trailing exactly-zero coefficients trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct LPoly {
    coeffs: Vec<PuiseuxSeries>,
}

impl LPoly {
    pub fn from_coeffs(mut coeffs: Vec<PuiseuxSeries>) -> Self {
        while coeffs.last().is_some_and(PuiseuxSeries::is_exactly_zero) {
            coeffs.pop();
        }
        LPoly { coeffs }
    }

    pub fn zero() -> Self {
        LPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: PuiseuxSeries) -> Self {
        LPoly::from_coeffs(vec![c])
    }

    pub fn var() -> Self {
        LPoly::from_coeffs(vec![PuiseuxSeries::zero(), PuiseuxSeries::one()])
    }

    pub fn coeffs(&self) -> &[PuiseuxSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PuiseuxSeries {
        self.coeffs.get(i).cloned().unwrap_or_else(PuiseuxSeries::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        LPoly::from_coeffs((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        LPoly::from_coeffs((0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LPoly::zero();
        }
        let mut out = vec![PuiseuxSeries::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        LPoly::from_coeffs(out)
    }

    /// Multiply every coefficient by a series.
    pub fn scale_series(&self, s: &PuiseuxSeries) -> Self {
        LPoly::from_coeffs(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// Multiply every coefficient by `t^e`.
    pub fn shift_all(&self, e: &Rat) -> Self {
        LPoly::from_coeffs(self.coeffs.iter().map(|c| c.shift(e)).collect())
    }

    /// Evaluate at a series point (Horner).
    pub fn eval_series(&self, z: &PuiseuxSeries) -> PuiseuxSeries {
        let mut acc = PuiseuxSeries::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    /// Evaluate at a series with rational-function coefficients (Horner);
    /// plain coefficients embed as constants.
    pub fn eval_ratfn_series(&self, z: &Series<RatFn>) -> Series<RatFn> {
        let mut acc: Series<RatFn> = Series::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&embed_series(c));
        }
        acc
    }

    /// Substitute `z = a·z + b` (an affine change of variable), i.e. return
    /// the polynomial `p(a·z + b)`.
    pub fn substitute_affine(&self, a: &PuiseuxSeries, b: &PuiseuxSeries) -> Self {
        let lin = LPoly::from_coeffs(vec![b.clone(), a.clone()]);
        let mut acc = LPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&LPoly::constant(c.clone()));
        }
        acc
    }

    /// Substitute the Moebius argument `z = (a z + b)/(c z + d)` and clear
    /// denominators by homogenizing to the given degree:
    /// returns `(cz+d)^deg · p((az+b)/(cz+d))`.
    pub fn substitute_moebius_cleared(&self, m: &MoebiusL, deg: usize) -> Self {
        let top = LPoly::from_coeffs(vec![m.b.clone(), m.a.clone()]);
        let bot = LPoly::from_coeffs(vec![m.d.clone(), m.c.clone()]);
        let mut out = LPoly::zero();
        for (i, coeff) in self.coeffs.iter().enumerate() {
            let mut term = LPoly::constant(coeff.clone());
            term = term.mul(&top.pow(i as u32));
            term = term.mul(&bot.pow((deg - i) as u32));
            out = out.add(&term);
        }
        out
    }

    fn pow(&self, n: u32) -> Self {
        let mut acc = LPoly::constant(PuiseuxSeries::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Numeric evaluation: coefficients at `t = t0` (given branch), then
    /// Horner in `z`.
    pub fn eval_c64(&self, z: Complex64, t0: Complex64, branch: u32) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.evaluate_at(t0, branch);
        }
        acc
    }

    /// Descending-order printer with parenthesized multi-term coefficients,
    /// e.g. `z^2 + t` or `(1 + t)*z - t^2`.
    pub fn display_with_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_exactly_zero() {
                continue;
            }
            let zp = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            // Single-term real coefficients get their sign folded into the
            // joiner; everything else is parenthesized verbatim.
            let single = c.terms().len() == 1 && c.is_exact();
            let (neg, coef) = if single
                && c.terms()[0].coef.is_real()
                && num_traits::Signed::is_negative(&c.terms()[0].coef.re)
            {
                (true, c.neg())
            } else {
                (false, c.clone())
            };
            let body = if i == 0 {
                if single {
                    format!("{coef}")
                } else {
                    format!("({coef})")
                }
            } else if single && coef == PuiseuxSeries::one() {
                zp
            } else if single {
                format!("{coef}*{zp}")
            } else {
                format!("({coef})*{zp}")
            };
            pieces.push((neg, body));
        }
        let mut out = String::new();
        for (k, (neg, body)) in pieces.iter().enumerate() {
            if k == 0 {
                if *neg {
                    out.push('-');
                }
            } else {
                out.push_str(if *neg { " - " } else { " + " });
            }
            out.push_str(body);
        }
        out
    }
}

/// Embed a plain series into the ring of series with rational-function
/// coefficients.
fn embed_series(s: &PuiseuxSeries) -> Series<RatFn> {
    Series::from_terms(
        s.terms()
            .iter()
            .map(|t| Term {
                exp: t.exp.clone(),
                coef: RatFn::constant(t.coef.clone()),
            })
            .collect(),
        s.cutoff().clone(),
    )
}

/// Division-free Sylvester resultant of two series polynomials
/// (column-subset dynamic programming over the Sylvester matrix).
/// Exponential in the matrix size, so only used for small degrees; exact
/// inputs give an exact certificate.
fn sylvester_resultant(a: &LPoly, b: &LPoly) -> PuiseuxSeries {
    let m = a.degree().expect("nonzero");
    let n = b.degree().expect("nonzero");
    debug_assert!(m >= 1 && n >= 1 && m + n <= RESULTANT_DP_LIMIT);
    let size = m + n;
    // Row r < n holds a's coefficients descending, shifted right by r;
    // row n + r holds b's likewise.
    let entry = |row: usize, col: usize| -> Option<&PuiseuxSeries> {
        let (poly, deg, shift) = if row < n {
            (a, m, row)
        } else {
            (b, n, row - n)
        };
        if col < shift || col > shift + deg {
            return None;
        }
        let c = &poly.coeffs[deg - (col - shift)];
        if c.is_exactly_zero() {
            None
        } else {
            Some(c)
        }
    };
    // dp[mask] = signed sum over ways to fill the first popcount(mask) rows
    // using exactly the columns in `mask`.
    let mut dp: Vec<Option<PuiseuxSeries>> = vec![None; 1usize << size];
    dp[0] = Some(PuiseuxSeries::one());
    for row in 0..size {
        let mut next: Vec<Option<PuiseuxSeries>> = vec![None; 1usize << size];
        for (mask, val) in dp.iter().enumerate() {
            let Some(val) = val else { continue };
            if (mask as u32).count_ones() as usize != row {
                continue;
            }
            for col in 0..size {
                let bit = 1usize << col;
                if mask & bit != 0 {
                    continue;
                }
                let Some(e) = entry(row, col) else { continue };
                // Parity of inversions contributed by picking this column.
                let below = (mask >> (col + 1)).count_ones();
                let signed = if below % 2 == 1 { e.neg() } else { e.clone() };
                let contrib = val.mul(&signed);
                let slot = &mut next[mask | bit];
                *slot = Some(match slot.take() {
                    None => contrib,
                    Some(s) => s.add(&contrib),
                });
            }
        }
        dp = next;
    }
    dp[(1usize << size) - 1]
        .take()
        .unwrap_or_else(PuiseuxSeries::zero)
}

/// Largest Sylvester matrix handled by the division-free expansion.
const RESULTANT_DP_LIMIT: usize = 12;

/// Coprimality certificate for larger degrees: Euclidean remainders over
/// the series field. Division truncates coefficients at the default
/// precision, so this path can refuse to certify exact pairs that the
/// division-free resultant would settle; it never certifies wrongly.
fn euclid_coprime(a: &LPoly, b: &LPoly) -> Result<()> {
    let (mut a, mut b) = if a.degree() >= b.degree() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        if b.is_zero() {
            return Err(Error::Indeterminate(
                "numerator and denominator share a common factor".into(),
            ));
        }
        let db = b.degree().unwrap();
        let top = b.coeff(db);
        match top.val() {
            Valuation::Finite(_) => {}
            Valuation::Infinite => unreachable!("trimmed polynomial"),
            Valuation::ZeroModPrecision(_) => {
                return Err(Error::Indeterminate(
                    "coprimality certificate failed: a leading coefficient is \
                     zero modulo precision"
                        .into(),
                ));
            }
        }
        if db == 0 {
            return Ok(());
        }
        let top_inv = top.invert(&rat_int(DEFAULT_PRECISION))?;
        let mut r = a.coeffs().to_vec();
        while r.len() > db {
            let k = r.len() - 1 - db;
            let lead = r.last().unwrap().mul(&top_inv);
            for (i, bc) in b.coeffs().iter().enumerate().take(db) {
                r[k + i] = r[k + i].sub(&bc.mul(&lead));
            }
            // The top coefficient cancels exactly for the true quotient.
            r.pop();
            while r.last().is_some_and(PuiseuxSeries::is_exactly_zero) {
                r.pop();
            }
        }
        a = b;
        b = LPoly::from_coeffs(r);
    }
}

/// A rational map `num/den` over the series field, with a coprimality
/// certificate from construction.
#[derive(Debug, Clone)]
pub struct RationalMapL {
    num: LPoly,
    den: LPoly,
    degree: usize,
}

/// Result of reducing a rational map to the residue sphere: the induced
/// residue map plus the common factors that cancelled, as squarefree
/// polynomials with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedMap {
    pub map: RatFn,
    pub cancelled: Vec<(CPoly, u32)>,
}

fn certify_leading(p: &LPoly, what: &str) -> Result<()> {
    if let Some(top) = p.coeffs().last() {
        if let Valuation::ZeroModPrecision(c) = top.val() {
            return Err(Error::PrecisionExhausted(format!(
                "{what}: leading coefficient is zero modulo t^{}",
                rat_to_string(&c)
            )));
        }
    }
    Ok(())
}

impl RationalMapL {
    /// Build a rational map and certify that numerator and denominator are
    /// coprime.
    pub fn new(num: LPoly, den: LPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero(
                "rational map with zero denominator polynomial".into(),
            ));
        }
        if num.is_zero() {
            return Err(Error::DivisionByZero(
                "rational map with zero numerator polynomial".into(),
            ));
        }
        certify_leading(&num, "numerator")?;
        certify_leading(&den, "denominator")?;
        let m = num.degree().unwrap();
        let n = den.degree().unwrap();
        if m >= 1 && n >= 1 {
            if m + n <= RESULTANT_DP_LIMIT {
                let res = sylvester_resultant(&num, &den);
                match res.val() {
                    Valuation::Finite(_) => {}
                    Valuation::Infinite => {
                        return Err(Error::Indeterminate(
                            "numerator and denominator share a common factor \
                             (zero resultant)"
                                .into(),
                        ));
                    }
                    Valuation::ZeroModPrecision(c) => {
                        return Err(Error::Indeterminate(format!(
                            "coprimality certificate failed: resultant is zero \
                             modulo t^{}; increase precision",
                            rat_to_string(&c)
                        )));
                    }
                }
            } else {
                euclid_coprime(&num, &den)?;
            }
        }
        Ok(RationalMapL {
            num,
            den,
            degree: m.max(n),
        })
    }

    /// Build without the coprimality certificate (for compositions and
    /// conjugations that preserve coprimality by construction).
    pub fn new_unchecked(num: LPoly, den: LPoly) -> Result<Self> {
        if den.is_zero() || num.is_zero() {
            return Err(Error::DivisionByZero(
                "rational map with zero numerator or denominator".into(),
            ));
        }
        certify_leading(&num, "numerator")?;
        certify_leading(&den, "denominator")?;
        let degree = num.degree().unwrap().max(den.degree().unwrap());
        Ok(RationalMapL { num, den, degree })
    }

    pub fn num(&self) -> &LPoly {
        &self.num
    }

    pub fn den(&self) -> &LPoly {
        &self.den
    }

    /// Degree as a self-map of the projective line.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Clear the common power of `t`: divide both polynomials by
    /// `t^μ` where `μ` is the minimal coefficient valuation.
    pub fn normalize(&self) -> Self {
        let mut mu: Option<Rat> = None;
        for c in self.num.coeffs().iter().chain(self.den.coeffs()) {
            if let Valuation::Finite(v) = c.val() {
                mu = Some(match mu {
                    None => v,
                    Some(m) => m.min(v),
                });
            }
        }
        match mu {
            None => self.clone(),
            Some(mu) => RationalMapL {
                num: self.num.shift_all(&-mu.clone()),
                den: self.den.shift_all(&-mu),
                degree: self.degree,
            },
        }
    }

    /// Apply to a point of the projective line over the series field.
    pub fn apply_typei(&self, p: &PointP1L) -> Result<PointP1L> {
        match p {
            PointP1L::Infinity => {
                let m = self.num.degree().unwrap();
                let n = self.den.degree().unwrap();
                match m.cmp(&n) {
                    std::cmp::Ordering::Greater => Ok(PointP1L::Infinity),
                    std::cmp::Ordering::Less => Ok(PointP1L::zero()),
                    std::cmp::Ordering::Equal => {
                        let lead_num = self.num.coeff(m);
                        let lead_den = self.den.coeff(n);
                        Ok(PointP1L::Finite(
                            lead_num.divide(&lead_den, &rat_int(DEFAULT_PRECISION))?,
                        ))
                    }
                }
            }
            PointP1L::Finite(z) => {
                let n = self.num.eval_series(z);
                let d = self.den.eval_series(z);
                match d.val() {
                    Valuation::Infinite => Ok(PointP1L::Infinity),
                    Valuation::ZeroModPrecision(c) => Err(Error::PrecisionExhausted(format!(
                        "denominator vanishes modulo t^{} at the point",
                        rat_to_string(&c)
                    ))),
                    Valuation::Finite(_) => {
                        if n.is_exactly_zero() {
                            return Ok(PointP1L::zero());
                        }
                        Ok(PointP1L::Finite(n.divide(&d, &rat_int(DEFAULT_PRECISION))?))
                    }
                }
            }
        }
    }

    /// Image of a type-II point.
    ///
    /// Substituting `z = c + u·t^rv` (with `u` transcendental over the
    /// residue field) turns the map's value into a series in `t` whose
    /// coefficients are rational functions of `u`. Coefficients that are
    /// constant in `u` form the image center; the first `u`-dependent
    /// coefficient sits at the image's radius parameter. `budget` bounds
    /// the searched relative exponent range.
    pub fn image_typeii(&self, v: &TypeIIPoint, budget: &Rat) -> Result<TypeIIPoint> {
        let z_sub = embed_series(v.center()).add(&Series::monomial(
            v.rv().clone(),
            RatFn::var(),
        ));
        let n = self.num.eval_ratfn_series(&z_sub);
        let d = self.den.eval_ratfn_series(&z_sub);
        // Consume quotient terms as the division produces them: constant
        // coefficients extend the image center, the first `u`-dependent one
        // fixes the radius and ends the division. Stopping there matters —
        // later quotient terms grow rapidly in the rational-function ring
        // and are never needed.
        let mut center_terms: Vec<Term<ExactComplex>> = Vec::new();
        let mut radius: Option<Rat> = None;
        let end = n.divide_with(&d, budget, |term| match term.coef.constant_value() {
            Some(c) => {
                center_terms.push(Term { exp: term.exp, coef: c });
                true
            }
            None => {
                radius = Some(term.exp);
                false
            }
        })?;
        if let Some(rv) = radius {
            let center = PuiseuxSeries::from_terms_exact(center_terms);
            return TypeIIPoint::new(&center, rv);
        }
        match end.expect("the division only stops early at a radius") {
            QuotientEnd::Window(c) => Err(Error::PrecisionExhausted(format!(
                "image radius not resolved below t^{}; increase the budget",
                rat_to_string(&c)
            ))),
            QuotientEnd::Exact => Err(Error::ConstantReduction(
                "map is constant on the ball".into(),
            )),
        }
    }

    /// Reduce the map itself to the residue sphere: clear the minimal
    /// coefficient valuation, reduce every coefficient, and cancel common
    /// residue factors. The cancelled factors are reported squarefree with
    /// multiplicities.
    pub fn reduce_map(&self) -> Result<ReducedMap> {
        let normalized = self.normalize();
        let reduce_poly = |p: &LPoly| -> Result<CPoly> {
            let mut out = Vec::with_capacity(p.coeffs().len());
            for c in p.coeffs() {
                match crate::berkline::reduce_hat(c)? {
                    CP1::Finite(r) => out.push(r),
                    CP1::Infinity => unreachable!("normalized coefficients are integral"),
                }
            }
            Ok(CPoly::from_coeffs(out))
        };
        let rnum = reduce_poly(&normalized.num)?;
        let rden = reduce_poly(&normalized.den)?;
        if rden.is_zero() && rnum.is_zero() {
            return Err(Error::PrecisionExhausted(
                "all reduced coefficients vanish".into(),
            ));
        }
        if rden.is_zero() {
            return Err(Error::ConstantReduction(
                "reduction is identically infinity".into(),
            ));
        }
        let gcd = rnum.gcd_monic(&rden);
        let cancelled = gcd.squarefree_decomposition();
        let map = RatFn::new(rnum, rden)?;
        Ok(ReducedMap { map, cancelled })
    }

    /// The tangent map at `v` toward its image `w = F(v)`: the residue of
    /// `chart(w)^{-1} ∘ F ∘ chart(v)`. Its degree is the local degree of
    /// the map at `v`. Fails with a constant-reduction error when `w` is
    /// not the image of `v`.
    pub fn tangent_map(&self, v: &TypeIIPoint, w: &TypeIIPoint) -> Result<RatFn> {
        let conj = self.conjugate_by_charts(v, w)?;
        let reduced = conj.reduce_map()?;
        if reduced.map.is_constant() {
            return Err(Error::ConstantReduction(
                "tangent map is constant; the target is not the image vertex".into(),
            ));
        }
        Ok(reduced.map)
    }

    /// `chart(w)^{-1} ∘ F ∘ chart(v)` as a rational map over the series
    /// field.
    fn conjugate_by_charts(&self, v: &TypeIIPoint, w: &TypeIIPoint) -> Result<RationalMapL> {
        // F ∘ chart(v): substitute z = c_v + t^{rv_v}·u.
        let tv = PuiseuxSeries::t_pow(v.rv().clone());
        let num_sub = self.num.substitute_affine(&tv, v.center());
        let den_sub = self.den.substitute_affine(&tv, v.center());
        // chart(w)^{-1}(z) = (z - c_w)/t^{rv_w}.
        let g_num = num_sub
            .sub(&den_sub.scale_series(w.center()))
            .shift_all(&-w.rv().clone());
        RationalMapL::new_unchecked(g_num, den_sub)
    }

    /// Local degree of the map at a type-II point: the degree of its
    /// tangent map there.
    pub fn local_degree(&self, v: &TypeIIPoint, budget: &Rat) -> Result<usize> {
        let w = self.image_typeii(v, budget)?;
        Ok(self.tangent_map(v, &w)?.map_degree())
    }

    /// Conjugate by Moebius transformations: `left ∘ F ∘ right`.
    pub fn sandwich(&self, left: &MoebiusL, right: &MoebiusL) -> Result<RationalMapL> {
        let deg = self.degree;
        let num_r = self.num.substitute_moebius_cleared(right, deg);
        let den_r = self.den.substitute_moebius_cleared(right, deg);
        // left ∘ (N/D) = (a·N + b·D)/(c·N + d·D).
        let num = num_r
            .scale_series(&left.a)
            .add(&den_r.scale_series(&left.b));
        let den = num_r
            .scale_series(&left.c)
            .add(&den_r.scale_series(&left.d));
        RationalMapL::new_unchecked(num, den)
    }

    /// Numeric evaluation at a complex point for a numeric parameter value.
    pub fn eval_c64(&self, z: Complex64, t0: Complex64, branch: u32) -> Complex64 {
        self.num.eval_c64(z, t0, branch) / self.den.eval_c64(z, t0, branch)
    }

    /// `num/den` as display text, e.g. `(z^2 + t)/z`.
    pub fn display_with_var(&self, var: &str) -> String {
        let n = self.num.display_with_var(var);
        if self.den.degree() == Some(0) && self.den.coeff(0) == PuiseuxSeries::one() {
            return n;
        }
        let d = self.den.display_with_var(var);
        let wrap = |s: &str, p: &LPoly| {
            let multi = p.coeffs().iter().filter(|c| !c.is_exactly_zero()).count() > 1
                || p.coeffs()
                    .iter()
                    .any(|c| !c.is_exactly_zero() && c.terms().len() > 1);
            if multi {
                format!("({s})")
            } else {
                s.to_string()
            }
        };
        format!("{}/{}", wrap(&n, &self.num), wrap(&d, &self.den))
    }
}

/// Multiplicity of a residue self-map at a point of the residue sphere:
/// the local degree with which `p` maps to its image.
pub fn local_mult_at(f: &RatFn, p: &CP1) -> u32 {
    match p {
        CP1::Infinity => {
            let d = f.map_degree();
            let flipped = RatFn::new(
                f.num().reverse_padded(d),
                f.den().reverse_padded(d),
            )
            .expect("reversal keeps the denominator nonzero");
            local_mult_at(&flipped, &CP1::zero())
        }
        CP1::Finite(a) => match f.apply_cp1(p) {
            CP1::Infinity => f.den().root_multiplicity(a),
            CP1::Finite(q) => f
                .num()
                .sub(&f.den().scale(&q))
                .root_multiplicity(a),
        },
    }
}

/// Number of distinct preimages of a residue point under a residue map.
pub fn distinct_preimages(f: &RatFn, q: &CP1) -> usize {
    let at_infinity = usize::from(f.apply_cp1(&CP1::Infinity) == *q);
    match q {
        CP1::Infinity => f.den().distinct_root_count() + at_infinity,
        CP1::Finite(b) => {
            let h = f.num().sub(&f.den().scale(b));
            h.distinct_root_count() + at_infinity
        }
    }
}
