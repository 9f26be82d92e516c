//! Moebius transformations over the series field and over the residue
//! field, and their actions on points and balls.
//!
//! A transformation `(az+b)/(cz+d)` with series entries acts on the
//! projective line over the series field and, by transporting chart
//! triples, on type-II points. Reducing the matrix modulo the maximal ideal
//! (after clearing the minimal valuation) yields either a residue Moebius
//! map — exactly when the transformation fixes the Gauss point — or a
//! degenerate constant, which names the direction the transformation
//! collapses the residue sphere to.

use crate::berkline::{separating_vertex, PointP1L, TypeIIPoint};
use crate::cpoly::{CPoly, RatFn};
use crate::error::{Error, Result};
use crate::exact::{rat_int, CP1, ExactComplex, Rat};
use crate::puiseux::{PuiseuxSeries, Valuation, DEFAULT_PRECISION};

/// Moebius transformation `z ↦ (az + b)/(cz + d)` with series entries.
#[derive(Debug, Clone)]
pub struct MoebiusL {
    pub a: PuiseuxSeries,
    pub b: PuiseuxSeries,
    pub c: PuiseuxSeries,
    pub d: PuiseuxSeries,
}

fn division_window() -> Rat {
    rat_int(DEFAULT_PRECISION)
}

impl MoebiusL {
    /// Build a transformation, certifying invertibility.
    pub fn new(
        a: PuiseuxSeries,
        b: PuiseuxSeries,
        c: PuiseuxSeries,
        d: PuiseuxSeries,
    ) -> Result<Self> {
        let det = a.mul(&d).sub(&b.mul(&c));
        match det.val() {
            Valuation::Finite(_) => Ok(MoebiusL { a, b, c, d }),
            Valuation::Infinite => Err(Error::NotDistinct(
                "Moebius transformation is degenerate (zero determinant)".into(),
            )),
            Valuation::ZeroModPrecision(_) => Err(Error::PrecisionExhausted(
                "Moebius determinant is zero modulo precision".into(),
            )),
        }
    }

    pub fn identity() -> Self {
        MoebiusL {
            a: PuiseuxSeries::one(),
            b: PuiseuxSeries::zero(),
            c: PuiseuxSeries::zero(),
            d: PuiseuxSeries::one(),
        }
    }

    /// The affine chart map `z ↦ center + t^rv · z` of a ball: it sends the
    /// Gauss point to `B(center, rv)` and `(0, 1, ∞)` to the ball's chart
    /// triple.
    pub fn scale_ball(v: &TypeIIPoint) -> Self {
        MoebiusL {
            a: PuiseuxSeries::t_pow(v.rv().clone()),
            b: v.center().clone(),
            c: PuiseuxSeries::zero(),
            d: PuiseuxSeries::one(),
        }
    }

    /// The transformation sending `(0, 1, ∞)` to the given triple of
    /// pairwise distinct points.
    pub fn from_triple(triple: &[PointP1L; 3]) -> Result<Self> {
        use crate::berkline::same_point;
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if same_point(&triple[i], &triple[j])? {
                return Err(Error::NotDistinct(format!(
                    "chart triple has coincident entries {i} and {j}"
                )));
            }
        }
        use PointP1L::{Finite, Infinity};
        let m = match triple {
            [Finite(p0), Finite(p1), Finite(pi)] => {
                // (p∞(p1-p0) z + p0(p∞-p1)) / ((p1-p0) z + (p∞-p1))
                let d10 = p1.sub(p0);
                let di1 = pi.sub(p1);
                MoebiusL {
                    a: pi.mul(&d10),
                    b: p0.mul(&di1),
                    c: d10,
                    d: di1,
                }
            }
            [Infinity, Finite(p1), Finite(pi)] => {
                // (p∞ z + (p1 - p∞)) / z
                MoebiusL {
                    a: pi.clone(),
                    b: p1.sub(pi),
                    c: PuiseuxSeries::one(),
                    d: PuiseuxSeries::zero(),
                }
            }
            [Finite(p0), Infinity, Finite(pi)] => {
                // (p∞ z - p0) / (z - 1)
                MoebiusL {
                    a: pi.clone(),
                    b: p0.neg(),
                    c: PuiseuxSeries::one(),
                    d: PuiseuxSeries::one().neg(),
                }
            }
            [Finite(p0), Finite(p1), Infinity] => {
                // (p1 - p0) z + p0
                MoebiusL {
                    a: p1.sub(p0),
                    b: p0.clone(),
                    c: PuiseuxSeries::zero(),
                    d: PuiseuxSeries::one(),
                }
            }
            _ => unreachable!("two infinities were rejected as coincident"),
        };
        MoebiusL::new(m.a, m.b, m.c, m.d)
    }

    /// Matrix product: `(self ∘ other)(z) = self(other(z))`.
    pub fn compose(&self, other: &Self) -> Self {
        MoebiusL {
            a: self.a.mul(&other.a).add(&self.b.mul(&other.c)),
            b: self.a.mul(&other.b).add(&self.b.mul(&other.d)),
            c: self.c.mul(&other.a).add(&self.d.mul(&other.c)),
            d: self.c.mul(&other.b).add(&self.d.mul(&other.d)),
        }
    }

    /// Compositional inverse (the adjugate matrix).
    pub fn invert(&self) -> Self {
        MoebiusL {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    /// Apply to a point of the projective line.
    pub fn apply(&self, p: &PointP1L) -> Result<PointP1L> {
        let (num, den) = match p {
            PointP1L::Finite(z) => (self.a.mul(z).add(&self.b), self.c.mul(z).add(&self.d)),
            PointP1L::Infinity => (self.a.clone(), self.c.clone()),
        };
        match den.val() {
            Valuation::Infinite => Ok(PointP1L::Infinity),
            Valuation::ZeroModPrecision(c) => Err(Error::PrecisionExhausted(format!(
                "Moebius denominator is zero modulo t^{}",
                crate::exact::rat_to_string(&c)
            ))),
            Valuation::Finite(_) => {
                if num.is_exactly_zero() {
                    return Ok(PointP1L::zero());
                }
                Ok(PointP1L::Finite(num.divide(&den, &division_window())?))
            }
        }
    }

    /// Apply to a type-II point by transporting its chart triple and
    /// re-separating the images.
    pub fn apply_typeii(&self, v: &TypeIIPoint) -> Result<TypeIIPoint> {
        let [p, q, r] = v.chart_triple();
        let ip = self.apply(&p)?;
        let iq = self.apply(&q)?;
        let ir = self.apply(&r)?;
        separating_vertex(&ip, &iq, &ir)
    }

    /// Reduce modulo the maximal ideal after clearing the minimal entry
    /// valuation.
    ///
    /// The result is a genuine residue Moebius map exactly when the
    /// transformation fixes the Gauss point; otherwise the residue matrix
    /// is singular and the reduction is the constant direction it collapses
    /// to.
    pub fn reduce(&self) -> Result<ReducedMoebius> {
        let entries = [&self.a, &self.b, &self.c, &self.d];
        let mut min_val: Option<Rat> = None;
        for e in &entries {
            if let Valuation::Finite(v) = e.val() {
                min_val = Some(match min_val {
                    None => v,
                    Some(m) => m.min(v),
                });
            }
        }
        let m = min_val.ok_or_else(|| {
            Error::PrecisionExhausted("all Moebius entries are zero modulo precision".into())
        })?;
        for e in &entries {
            if let Valuation::ZeroModPrecision(c) = e.val() {
                if c < m {
                    return Err(Error::PrecisionExhausted(
                        "a Moebius entry is unresolved at the normalizing valuation".into(),
                    ));
                }
            }
        }
        let red = |s: &PuiseuxSeries| -> Result<ExactComplex> {
            match crate::berkline::reduce_hat(&s.shift(&-m.clone()))? {
                CP1::Finite(c) => Ok(c),
                CP1::Infinity => unreachable!("entries have valuation >= m"),
            }
        };
        let (ra, rb) = (red(&self.a)?, red(&self.b)?);
        let (rc, rd) = (red(&self.c)?, red(&self.d)?);
        let det = ra.mul(&rd).sub(&rb.mul(&rc));
        if !det.is_zero() {
            return Ok(ReducedMoebius::Map(MoebiusC::new(ra, rb, rc, rd)?));
        }
        // Rank-one residue matrix: the map is the constant A/C = B/D.
        let value = if !rc.is_zero() {
            CP1::Finite(ra.mul(&rc.inv()?))
        } else if !rd.is_zero() {
            CP1::Finite(rb.mul(&rd.inv()?))
        } else {
            CP1::Infinity
        };
        Ok(ReducedMoebius::Degenerate(value))
    }
}

/// Outcome of reducing a series Moebius transformation to the residue
/// sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum ReducedMoebius {
    /// Invertible residue map: the transformation fixes the Gauss point.
    Map(MoebiusC),
    /// Constant reduction with the given value.
    Degenerate(CP1),
}

/// Moebius transformation with exact complex (residue field) entries.
#[derive(Debug, Clone, PartialEq)]
pub struct MoebiusC {
    pub a: ExactComplex,
    pub b: ExactComplex,
    pub c: ExactComplex,
    pub d: ExactComplex,
}

impl MoebiusC {
    pub fn new(a: ExactComplex, b: ExactComplex, c: ExactComplex, d: ExactComplex) -> Result<Self> {
        if a.mul(&d).sub(&b.mul(&c)).is_zero() {
            return Err(Error::NotDistinct(
                "residue Moebius transformation is degenerate".into(),
            ));
        }
        Ok(MoebiusC { a, b, c, d })
    }

    pub fn identity() -> Self {
        MoebiusC {
            a: ExactComplex::one(),
            b: ExactComplex::zero(),
            c: ExactComplex::zero(),
            d: ExactComplex::one(),
        }
    }

    pub fn apply(&self, p: &CP1) -> CP1 {
        self.to_ratfn().apply_cp1(p)
    }

    pub fn compose(&self, other: &Self) -> Self {
        MoebiusC {
            a: self.a.mul(&other.a).add(&self.b.mul(&other.c)),
            b: self.a.mul(&other.b).add(&self.b.mul(&other.d)),
            c: self.c.mul(&other.a).add(&self.d.mul(&other.c)),
            d: self.c.mul(&other.b).add(&self.d.mul(&other.d)),
        }
    }

    pub fn invert(&self) -> Self {
        MoebiusC {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
    }

    /// The transformation as a reduced rational function (canonical form).
    pub fn to_ratfn(&self) -> RatFn {
        RatFn::new(
            CPoly::from_coeffs(vec![self.b.clone(), self.a.clone()]),
            CPoly::from_coeffs(vec![self.d.clone(), self.c.clone()]),
        )
        .expect("invertible matrix has nonzero denominator row")
    }

    /// Projective equality of the underlying maps.
    pub fn same_map(&self, other: &Self) -> bool {
        self.to_ratfn() == other.to_ratfn()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puiseux::{series_int, t_rat};

    fn fin(s: PuiseuxSeries) -> PointP1L {
        PointP1L::Finite(s)
    }

    #[test]
    fn from_triple_of_integers() {
        // (0,1,∞) ↦ (1,2,3) is z ↦ (3z+1)/(z+1).
        let m = MoebiusL::from_triple(&[
            fin(series_int(1)),
            fin(series_int(2)),
            fin(series_int(3)),
        ])
        .unwrap();
        assert_eq!(m.apply(&PointP1L::zero()).unwrap(), fin(series_int(1)));
        assert_eq!(m.apply(&PointP1L::one()).unwrap(), fin(series_int(2)));
        assert_eq!(m.apply(&PointP1L::Infinity).unwrap(), fin(series_int(3)));
        // Its inverse sends the triple back.
        let inv = m.invert();
        assert_eq!(inv.apply(&fin(series_int(2))).unwrap(), PointP1L::one());
        assert_eq!(inv.apply(&fin(series_int(3))).unwrap(), PointP1L::Infinity);
    }

    #[test]
    fn from_triple_infinity_positions() {
        for (triple, checks) in [
            (
                [PointP1L::Infinity, PointP1L::zero(), PointP1L::one()],
                [
                    (PointP1L::zero(), PointP1L::Infinity),
                    (PointP1L::one(), PointP1L::zero()),
                    (PointP1L::Infinity, PointP1L::one()),
                ],
            ),
            (
                [PointP1L::zero(), PointP1L::Infinity, PointP1L::one()],
                [
                    (PointP1L::zero(), PointP1L::zero()),
                    (PointP1L::one(), PointP1L::Infinity),
                    (PointP1L::Infinity, PointP1L::one()),
                ],
            ),
            (
                [fin(t_rat(1, 1)), PointP1L::one(), PointP1L::Infinity],
                [
                    (PointP1L::zero(), fin(t_rat(1, 1))),
                    (PointP1L::one(), PointP1L::one()),
                    (PointP1L::Infinity, PointP1L::Infinity),
                ],
            ),
        ] {
            let m = MoebiusL::from_triple(&triple).unwrap();
            for (input, expected) in checks {
                assert_eq!(m.apply(&input).unwrap(), expected);
            }
        }
    }

    #[test]
    fn coincident_triple_entries_are_rejected() {
        let e = MoebiusL::from_triple(&[
            PointP1L::zero(),
            PointP1L::zero(),
            PointP1L::Infinity,
        ])
        .unwrap_err();
        assert_eq!(e.code(), "NOT_DISTINCT");
        let e2 = MoebiusL::from_triple(&[
            PointP1L::Infinity,
            PointP1L::zero(),
            PointP1L::Infinity,
        ])
        .unwrap_err();
        assert_eq!(e2.code(), "NOT_DISTINCT");
    }

    #[test]
    fn scaling_moves_the_gauss_point() {
        // z ↦ tz sends the Gauss point to B(0, 1).
        let m = MoebiusL::new(
            t_rat(1, 1),
            PuiseuxSeries::zero(),
            PuiseuxSeries::zero(),
            PuiseuxSeries::one(),
        )
        .unwrap();
        let img = m.apply_typeii(&TypeIIPoint::gauss()).unwrap();
        assert_eq!(img, TypeIIPoint::new(&PuiseuxSeries::zero(), rat_int(1)).unwrap());
    }

    #[test]
    fn inversion_flips_ball_radii() {
        // z ↦ 1/z sends B(0, -1) to B(0, 1).
        let m = MoebiusL::new(
            PuiseuxSeries::zero(),
            PuiseuxSeries::one(),
            PuiseuxSeries::one(),
            PuiseuxSeries::zero(),
        )
        .unwrap();
        let b = TypeIIPoint::new(&PuiseuxSeries::zero(), rat_int(-1)).unwrap();
        assert_eq!(
            m.apply_typeii(&b).unwrap(),
            TypeIIPoint::new(&PuiseuxSeries::zero(), rat_int(1)).unwrap()
        );
        // And it fixes the Gauss point.
        assert_eq!(m.apply_typeii(&TypeIIPoint::gauss()).unwrap(), TypeIIPoint::gauss());
    }

    #[test]
    fn translation_moves_deep_balls() {
        // z ↦ z + 1/t sends B(0, 0) to B(1/t, 0).
        let m = MoebiusL::new(
            PuiseuxSeries::one(),
            t_rat(-1, 1),
            PuiseuxSeries::zero(),
            PuiseuxSeries::one(),
        )
        .unwrap();
        let img = m.apply_typeii(&TypeIIPoint::gauss()).unwrap();
        assert_eq!(img, TypeIIPoint::new(&t_rat(-1, 1), rat_int(0)).unwrap());
    }

    #[test]
    fn chart_of_a_ball_is_from_triple_of_its_chart_triple() {
        let v = TypeIIPoint::new(&t_rat(-2, 1).add(&series_int(3)), rat_int(2)).unwrap();
        let m1 = MoebiusL::scale_ball(&v);
        let m2 = MoebiusL::from_triple(&v.chart_triple()).unwrap();
        // Same action on a spanning set.
        for p in [PointP1L::zero(), PointP1L::one(), PointP1L::Infinity, fin(t_rat(1, 1))] {
            assert_eq!(m1.apply(&p).unwrap(), m2.apply(&p).unwrap());
        }
        assert_eq!(m1.apply_typeii(&TypeIIPoint::gauss()).unwrap(), v);
    }

    #[test]
    fn action_is_compatible_with_composition() {
        let m = MoebiusL::from_triple(&[
            fin(t_rat(1, 1)),
            fin(series_int(1).add(&t_rat(2, 1))),
            PointP1L::Infinity,
        ])
        .unwrap();
        let n = MoebiusL::new(
            PuiseuxSeries::zero(),
            PuiseuxSeries::one(),
            PuiseuxSeries::one(),
            PuiseuxSeries::zero(),
        )
        .unwrap();
        let v = TypeIIPoint::new(&PuiseuxSeries::zero(), rat_int(-1)).unwrap();
        let lhs = m.compose(&n).apply_typeii(&v).unwrap();
        let rhs = m.apply_typeii(&n.apply_typeii(&v).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_of_a_scaling_is_degenerate() {
        // z ↦ tz does not fix the Gauss point; its reduction collapses to 0.
        let m = MoebiusL::new(
            t_rat(1, 1),
            PuiseuxSeries::zero(),
            PuiseuxSeries::zero(),
            PuiseuxSeries::one(),
        )
        .unwrap();
        assert_eq!(m.reduce().unwrap(), ReducedMoebius::Degenerate(CP1::zero()));
        // z ↦ z/t collapses to ∞.
        let minv = m.invert();
        assert_eq!(
            minv.reduce().unwrap(),
            ReducedMoebius::Degenerate(CP1::Infinity)
        );
    }

    #[test]
    fn reduction_of_gauss_fixing_maps() {
        // z ↦ (z + t)/(1 + tz) fixes the Gauss point and reduces to the
        // identity.
        let m = MoebiusL::new(
            PuiseuxSeries::one(),
            t_rat(1, 1),
            t_rat(1, 1),
            PuiseuxSeries::one(),
        )
        .unwrap();
        assert_eq!(m.apply_typeii(&TypeIIPoint::gauss()).unwrap(), TypeIIPoint::gauss());
        match m.reduce().unwrap() {
            ReducedMoebius::Map(r) => assert!(r.same_map(&MoebiusC::identity())),
            other => panic!("expected a map, got {other:?}"),
        }
        // Common scaling of all entries is cleared before reducing.
        let scaled = MoebiusL::new(
            t_rat(3, 1),
            PuiseuxSeries::zero(),
            PuiseuxSeries::zero(),
            t_rat(3, 1),
        )
        .unwrap();
        match scaled.reduce().unwrap() {
            ReducedMoebius::Map(r) => assert!(r.same_map(&MoebiusC::identity())),
            other => panic!("expected a map, got {other:?}"),
        }
    }

    #[test]
    fn reduction_is_a_map_iff_gauss_is_fixed() {
        let samples = [
            MoebiusL::from_triple(&[PointP1L::zero(), PointP1L::one(), PointP1L::Infinity])
                .unwrap(),
            MoebiusL::from_triple(&[fin(t_rat(1, 1)), PointP1L::one(), PointP1L::Infinity])
                .unwrap(),
            MoebiusL::from_triple(&[PointP1L::zero(), fin(t_rat(1, 1)), PointP1L::Infinity])
                .unwrap(),
            MoebiusL::from_triple(&[fin(t_rat(-1, 1)), PointP1L::zero(), fin(series_int(5))])
                .unwrap(),
            MoebiusL::from_triple(&[
                fin(series_int(2)),
                fin(series_int(1).add(&t_rat(1, 1))),
                PointP1L::Infinity,
            ])
            .unwrap(),
        ];
        for m in samples {
            let fixes = m.apply_typeii(&TypeIIPoint::gauss()).unwrap() == TypeIIPoint::gauss();
            let reduced_to_map = matches!(m.reduce().unwrap(), ReducedMoebius::Map(_));
            assert_eq!(fixes, reduced_to_map, "entries {:?}", (&m.a, &m.b, &m.c, &m.d));
        }
    }

    #[test]
    fn residue_moebius_group_ops() {
        let m = MoebiusC::new(
            ExactComplex::from_int(2),
            ExactComplex::one(),
            ExactComplex::one(),
            ExactComplex::one(),
        )
        .unwrap();
        let id = m.compose(&m.invert());
        assert!(id.same_map(&MoebiusC::identity()));
        assert_eq!(m.apply(&CP1::zero()), CP1::one());
        assert_eq!(m.apply(&CP1::Infinity), CP1::from_int(2));
        assert_eq!(m.apply(&CP1::from_int(-1)), CP1::Infinity);
    }
}
