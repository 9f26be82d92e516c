//! Text grammar for series, points, balls, and map polynomials.
//!
//! The grammar accepts exactly what the crate's printers emit (plus
//! insignificant whitespace), so parsing a printed value always
//! reconstructs it. Errors carry the byte offset of the first unusable
//! character.
//!
//! ```text
//! series  := '-'? piece (('+'|'-') piece)*
//! piece   := 'O' '(' tpower ')'            -- cutoff, last piece only
//!          | coeff ('*' tpower)?
//!          | tpower
//! coeff   := rational | complex
//! complex := '(' rational ('+'|'-') rational 'i' ')'
//! tpower  := 't' ('^' rational)?
//! rational:= '-'? digits ('/' digits)?
//! point   := 'inf' | series
//! ball    := '<' series ';' rational '>'
//! poly    := '-'? pterm (('+'|'-') pterm)*
//! pterm   := (factor '*')* (factor | zpower)
//! factor  := coeff | tpower | '(' series ')'
//! zpower  := 'z' ('^' digits)?
//! ```
//!
//! Each series term has at most one t-power and each polynomial term at
//! most one of every factor kind, with the `z` power last — multiplication
//! is for attaching coefficients, not general rewriting.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::berkline::{PointP1L, TypeIIPoint};
use crate::error::{Error, Result};
use crate::exact::{Rat, ExactComplex};
use crate::puiseux::{Cutoff, PuiseuxSeries, Term};
use crate::ratmap::LPoly;

/// Largest accepted `z`-exponent; guards against absurd allocations.
const MAX_Z_DEGREE: usize = 4096;

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\n')) {
            self.bump();
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8, what: &str) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            expected: expected.to_string(),
        })
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return self.fail("a number");
        }
        let text = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        Ok(text.parse::<BigInt>().expect("digit strings parse"))
    }

    fn rational(&mut self) -> Result<Rat> {
        let neg = self.eat(b'-');
        let num = self.digits()?;
        let den = if self.eat(b'/') {
            let at = self.pos;
            let d = self.digits()?;
            if d.is_zero() {
                return Err(Error::Syntax {
                    offset: at,
                    expected: "a nonzero denominator".to_string(),
                });
            }
            d
        } else {
            BigInt::from(1)
        };
        Ok(Rat::new(if neg { -num } else { num }, den))
    }

    /// `(a+bi)` with both parts rational.
    fn complex_atom(&mut self) -> Result<ExactComplex> {
        self.expect(b'(', "'('")?;
        let re = self.rational()?;
        let sign = match self.peek() {
            Some(b'+') => 1,
            Some(b'-') => -1,
            _ => return self.fail("'+' or '-' inside a complex coefficient"),
        };
        self.bump();
        let im = self.rational()?;
        self.expect(b'i', "'i'")?;
        self.expect(b')', "')'")?;
        Ok(ExactComplex::new(re, if sign < 0 { -im } else { im }))
    }

    fn try_complex_atom(&mut self) -> Option<ExactComplex> {
        let save = self.pos;
        match self.complex_atom() {
            Ok(c) => Some(c),
            Err(_) => {
                self.pos = save;
                None
            }
        }
    }

    /// `t` or `t^e`; returns the exponent.
    fn tpower(&mut self) -> Result<Rat> {
        self.expect(b't', "'t'")?;
        if self.eat(b'^') {
            self.rational()
        } else {
            Ok(Rat::from(BigInt::from(1)))
        }
    }

    /// Series pieces up to (not including) `stop` or the end of input.
    fn series(&mut self, stop: Option<u8>) -> Result<PuiseuxSeries> {
        let mut terms: Vec<Term<ExactComplex>> = Vec::new();
        let mut cutoff = Cutoff::Infinite;
        self.skip_ws();
        let mut neg = self.eat(b'-');
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'O') => {
                    if neg {
                        return self.fail("a term (the cutoff cannot be negated)");
                    }
                    self.bump();
                    self.expect(b'(', "'('")?;
                    cutoff = Cutoff::Finite(self.tpower()?);
                    self.expect(b')', "')'")?;
                    self.skip_ws();
                    if !(self.at_end() || self.peek() == stop) {
                        return self.fail("end of the series after the O(..) cutoff");
                    }
                    break;
                }
                Some(b't') => {
                    let exp = self.tpower()?;
                    let coef = ExactComplex::one();
                    terms.push(Term {
                        exp,
                        coef: if neg { coef.neg() } else { coef },
                    });
                }
                Some(b'(') => {
                    let coef = self.complex_atom()?;
                    let exp = self.term_exponent()?;
                    terms.push(Term {
                        exp,
                        coef: if neg { coef.neg() } else { coef },
                    });
                }
                Some(c) if c.is_ascii_digit() => {
                    let coef = ExactComplex::new(self.rational()?, Rat::from(BigInt::from(0)));
                    let exp = self.term_exponent()?;
                    terms.push(Term {
                        exp,
                        coef: if neg { coef.neg() } else { coef },
                    });
                }
                _ => return self.fail("a term: a number, a t-power, or O(..)"),
            }
            self.skip_ws();
            if self.at_end() || self.peek() == stop {
                break;
            }
            neg = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => {
                    return self.fail(
                        "'+' or '-' between terms (each term has a single t-power)",
                    )
                }
            };
            self.bump();
        }
        Ok(PuiseuxSeries::from_terms(terms, cutoff))
    }

    /// Optional `* tpower` after a coefficient; 0 when absent.
    fn term_exponent(&mut self) -> Result<Rat> {
        let save = self.pos;
        self.skip_ws();
        if self.eat(b'*') {
            self.skip_ws();
            self.tpower()
        } else {
            self.pos = save;
            Ok(Rat::from(BigInt::from(0)))
        }
    }

    /// One `z`-polynomial term; returns (degree, coefficient).
    fn poly_term(&mut self) -> Result<(usize, PuiseuxSeries)> {
        let mut coef = PuiseuxSeries::one();
        let mut seen_scalar = false;
        let mut seen_tpower = false;
        let mut seen_series = false;
        let mut any = false;
        loop {
            self.skip_ws();
            let at = self.pos;
            match self.peek() {
                Some(b'z') => {
                    self.bump();
                    let deg = if self.eat(b'^') {
                        let at = self.pos;
                        let d = self.digits()?;
                        match usize::try_from(&d) {
                            Ok(d) if d <= MAX_Z_DEGREE => d,
                            _ => {
                                return Err(Error::Syntax {
                                    offset: at,
                                    expected: format!("a degree of at most {MAX_Z_DEGREE}"),
                                })
                            }
                        }
                    } else {
                        1
                    };
                    return Ok((deg, coef));
                }
                Some(b't') => {
                    if seen_tpower {
                        return Err(Error::Syntax {
                            offset: at,
                            expected: "a single t-power per term".to_string(),
                        });
                    }
                    seen_tpower = true;
                    let exp = self.tpower()?;
                    coef = coef.mul(&PuiseuxSeries::t_pow(exp));
                }
                Some(b'(') => {
                    if let Some(c) = self.try_complex_atom() {
                        if seen_scalar {
                            return Err(Error::Syntax {
                                offset: at,
                                expected: "a single numeric coefficient per term".to_string(),
                            });
                        }
                        seen_scalar = true;
                        coef = coef.scale(&c);
                    } else {
                        if seen_series {
                            return Err(Error::Syntax {
                                offset: at,
                                expected: "a single series coefficient per term".to_string(),
                            });
                        }
                        seen_series = true;
                        self.bump();
                        let s = self.series(Some(b')'))?;
                        self.expect(b')', "')'")?;
                        coef = coef.mul(&s);
                    }
                }
                Some(c) if c.is_ascii_digit() => {
                    if seen_scalar {
                        return Err(Error::Syntax {
                            offset: at,
                            expected: "a single numeric coefficient per term".to_string(),
                        });
                    }
                    seen_scalar = true;
                    let r = self.rational()?;
                    coef = coef.scale(&ExactComplex::new(r, Rat::from(BigInt::from(0))));
                }
                _ => {
                    if any {
                        return self.fail("a factor or 'z' after '*'");
                    }
                    return self.fail("a term: a coefficient or a power of z");
                }
            }
            any = true;
            let save = self.pos;
            self.skip_ws();
            if !self.eat(b'*') {
                self.pos = save;
                return Ok((0, coef));
            }
        }
    }
}

/// Parse a truncated Puiseux series from its canonical textual form.
pub fn parse_series(text: &str) -> Result<PuiseuxSeries> {
    let mut c = Cursor::new(text);
    let s = c.series(None)?;
    c.skip_ws();
    if !c.at_end() {
        return c.fail("end of input");
    }
    Ok(s)
}

/// Parse a point of the projective line: `inf` or a series.
pub fn parse_point(text: &str) -> Result<PointP1L> {
    if text.trim() == "inf" {
        return Ok(PointP1L::Infinity);
    }
    Ok(PointP1L::Finite(parse_series(text)?))
}

/// Parse a rational number, requiring the whole input to be consumed.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    let r = c.rational()?;
    c.skip_ws();
    if !c.at_end() {
        return c.fail("end of input");
    }
    Ok(r)
}

/// Parse a type-II point `<center; rv>`.
pub fn parse_typeii(text: &str) -> Result<TypeIIPoint> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    c.expect(b'<', "'<'")?;
    let center = c.series(Some(b';'))?;
    c.expect(b';', "';'")?;
    c.skip_ws();
    let rv = c.rational()?;
    c.skip_ws();
    c.expect(b'>', "'>'")?;
    c.skip_ws();
    if !c.at_end() {
        return c.fail("end of input");
    }
    TypeIIPoint::new(&center, rv)
}

/// Parse a polynomial in `z` with series coefficients.
pub fn parse_map_poly(text: &str) -> Result<LPoly> {
    let mut c = Cursor::new(text);
    let mut coeffs: Vec<PuiseuxSeries> = Vec::new();
    c.skip_ws();
    let mut neg = c.eat(b'-');
    loop {
        let (deg, coef) = c.poly_term()?;
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, PuiseuxSeries::zero());
        }
        let signed = if neg { coef.neg() } else { coef };
        coeffs[deg] = coeffs[deg].add(&signed);
        c.skip_ws();
        if c.at_end() {
            break;
        }
        neg = match c.peek() {
            Some(b'+') => false,
            Some(b'-') => true,
            _ => return c.fail("'+' or '-' between terms (z comes last in a term)"),
        };
        c.bump();
    }
    Ok(LPoly::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use crate::puiseux::{series_int, t_rat};

    fn offset_of(e: Error) -> usize {
        match e {
            Error::Syntax { offset, .. } => offset,
            other => panic!("expected a syntax error, got {other}"),
        }
    }

    #[test]
    fn printed_series_reparse_identically() {
        let samples = [
            "0",
            "1",
            "-1",
            "t",
            "-t",
            "2*t",
            "1/2",
            "-3/4 + t^2",
            "t^-1 - 1",
            "-2*t^3/2 + t^7",
            "(0+1i)*t^-1/3",
            "(1-2i)",
            "(-1/2+3i)*t + 5*t^2",
            "O(t)",
            "O(t^1/2)",
            "1 + t + O(t^2)",
            "t^-2 + O(t^-1)",
            "1 - t^1/3 + (0+2i)*t^2/3 + O(t^4/3)",
        ];
        for s in samples {
            let parsed = parse_series(s).unwrap();
            assert_eq!(parsed.to_string(), s, "round trip of {s}");
        }
    }

    #[test]
    fn parsing_canonicalizes_term_order() {
        let a = parse_series("t^2 + 1 + t^2").unwrap();
        let b = parse_series("1 + 2*t^2").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_series("1+t-2*t^2").unwrap();
        let b = parse_series(" 1 + t - 2 * t^2 ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn repeated_t_powers_are_rejected() {
        let e = parse_series("t^1/2 * t^1/2").unwrap_err();
        assert_eq!(offset_of(e), 6);
    }

    #[test]
    fn error_offsets_point_at_the_problem() {
        assert_eq!(offset_of(parse_series("1 +").unwrap_err()), 3);
        assert_eq!(offset_of(parse_series("t^").unwrap_err()), 2);
        assert_eq!(offset_of(parse_series("(1+2j)").unwrap_err()), 4);
        assert_eq!(offset_of(parse_series("1/0").unwrap_err()), 2);
        assert_eq!(offset_of(parse_series("O(t) + 1").unwrap_err()), 5);
        assert_eq!(offset_of(parse_series("x").unwrap_err()), 0);
    }

    #[test]
    fn points_and_infinity() {
        assert_eq!(parse_point("inf").unwrap(), PointP1L::Infinity);
        assert_eq!(parse_point(" inf ").unwrap(), PointP1L::Infinity);
        assert_eq!(
            parse_point("1 + t").unwrap(),
            PointP1L::Finite(series_int(1).add(&t_rat(1, 1)))
        );
    }

    #[test]
    fn balls_round_trip() {
        for s in ["<0; 0>", "<0; 1>", "<t^-1 - 1; 1>", "<1 + t; 5/2>"] {
            let b = parse_typeii(s).unwrap();
            assert_eq!(b.to_string(), s, "round trip of {s}");
        }
        assert_eq!(parse_typeii("<0; 0>").unwrap(), TypeIIPoint::gauss());
    }

    #[test]
    fn ball_canonicalization_drops_high_terms() {
        // Center terms at or above the radius parameter are redundant.
        let b = parse_typeii("<1 + t^3; 2>").unwrap();
        assert_eq!(b.to_string(), "<1; 2>");
    }

    #[test]
    fn map_polynomials_parse() {
        let p = parse_map_poly("t*z^3 + 1").unwrap();
        assert_eq!(
            p,
            LPoly::from_coeffs(vec![
                series_int(1),
                PuiseuxSeries::zero(),
                PuiseuxSeries::zero(),
                t_rat(1, 1),
            ])
        );
        let q = parse_map_poly("z^2 - z").unwrap();
        assert_eq!(
            q,
            LPoly::from_coeffs(vec![
                PuiseuxSeries::zero(),
                series_int(-1),
                PuiseuxSeries::one(),
            ])
        );
    }

    #[test]
    fn printed_polynomials_reparse_identically() {
        let samples = [
            "z^2 + t",
            "t*z^3 + 1",
            "(1 + t)*z - t^2",
            "z",
            "-z^2 + (0+1i)",
            "t^1/2*z^2 + z",
            "(1 + O(t^3))*z",
        ];
        for s in samples {
            let p = parse_map_poly(s).unwrap();
            assert_eq!(p.display_with_var("z"), s, "round trip of {s}");
        }
    }

    #[test]
    fn series_coefficients_may_nest_complex_atoms() {
        let p = parse_map_poly("(1 + (0+1i)*t)*z^2").unwrap();
        let coef = series_int(1).add(&PuiseuxSeries::monomial(
            rat_int(1),
            ExactComplex::new(rat(0, 1), rat(1, 1)),
        ));
        assert_eq!(p.coeff(2), coef);
    }

    #[test]
    fn polynomial_terms_keep_z_last() {
        let e = parse_map_poly("z*t").unwrap_err();
        assert_eq!(offset_of(e), 1);
        let e = parse_map_poly("t*t*z").unwrap_err();
        assert_eq!(offset_of(e), 2);
        let e = parse_map_poly("2*3*z").unwrap_err();
        assert_eq!(offset_of(e), 2);
        let e = parse_map_poly("z^5000").unwrap_err();
        assert_eq!(offset_of(e), 2);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-2").unwrap(), rat_int(-2));
        assert!(parse_rat("3.5").is_err());
    }
}
