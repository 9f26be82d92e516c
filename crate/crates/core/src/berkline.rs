//! Points and closed balls of the projective line over the series field.
//!
//! With the valuation `v` (least exponent) on Puiseux series, a *ball*
//! `B(c, r) = { z : v(z - c) >= r }` is determined by a center and a
//! rational radius parameter `rv` (large `rv` = small ball). Balls are the
//! type-II points of the Berkovich projective line over the series field;
//! the ball `B(0, 0)` of integral elements is the Gauss point.
//!
//! Every ball has a unique canonical representative: keep only the center
//! terms with exponent strictly below `rv`. [`TypeIIPoint`] stores that
//! representative, so structural equality *is* equality of balls, and all
//! comparisons are exact.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{rat_to_string, CP1, Rat};
use crate::puiseux::{Cutoff, PuiseuxSeries, Valuation};

/// A point of the projective line over the series field.
#[derive(Debug, Clone, PartialEq)]
pub enum PointP1L {
    Finite(PuiseuxSeries),
    Infinity,
}

impl PointP1L {
    pub fn zero() -> Self {
        PointP1L::Finite(PuiseuxSeries::zero())
    }

    pub fn one() -> Self {
        PointP1L::Finite(PuiseuxSeries::one())
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, PointP1L::Infinity)
    }

    /// Deterministic order: finite points by series data, then infinity.
    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PointP1L::Finite(a), PointP1L::Finite(b)) => a.cmp_lex(b),
            (PointP1L::Finite(_), PointP1L::Infinity) => Ordering::Less,
            (PointP1L::Infinity, PointP1L::Finite(_)) => Ordering::Greater,
            (PointP1L::Infinity, PointP1L::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for PointP1L {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointP1L::Finite(s) => write!(f, "{s}"),
            PointP1L::Infinity => write!(f, "inf"),
        }
    }
}

/// Relative position of two balls under inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallOrder {
    Equal,
    /// The first ball strictly contains the second.
    Ancestor,
    /// The first ball is strictly contained in the second.
    Descendant,
    /// Disjoint balls.
    Incomparable,
}

/// A type-II point: the ball `B(center, rv)`, in canonical form.
///
/// Canonical form: the center is an exact Puiseux polynomial all of whose
/// exponents are `< rv`. Canonical representatives are unique, so the
/// derived equality is equality of balls.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeIIPoint {
    center: PuiseuxSeries,
    rv: Rat,
}

impl TypeIIPoint {
    /// Canonicalize `B(center, rv)`.
    ///
    /// Fails with a precision error when the center is not known up to
    /// `t^rv` — then the ball is not determined by the data.
    pub fn new(center: &PuiseuxSeries, rv: Rat) -> Result<Self> {
        if let Cutoff::Finite(c) = center.cutoff() {
            if c < &rv {
                return Err(Error::PrecisionExhausted(format!(
                    "ball center known only below t^{}, need t^{}",
                    rat_to_string(c),
                    rat_to_string(&rv)
                )));
            }
        }
        let kept = center
            .terms()
            .iter()
            .filter(|t| t.exp < rv)
            .cloned()
            .collect();
        Ok(TypeIIPoint {
            center: PuiseuxSeries::from_terms_exact(kept),
            rv,
        })
    }

    /// The Gauss point `B(0, 0)`.
    pub fn gauss() -> Self {
        TypeIIPoint {
            center: PuiseuxSeries::zero(),
            rv: Rat::from_integer(0.into()),
        }
    }

    pub fn center(&self) -> &PuiseuxSeries {
        &self.center
    }

    pub fn rv(&self) -> &Rat {
        &self.rv
    }

    /// Whether the point `p` lies in this ball. Fails when `p` is not known
    /// to enough precision to decide.
    pub fn contains_point(&self, p: &PointP1L) -> Result<bool> {
        match p {
            PointP1L::Infinity => Ok(false),
            PointP1L::Finite(s) => {
                let diff = s.sub(&self.center);
                match diff.val() {
                    Valuation::Infinite => Ok(true),
                    Valuation::Finite(v) => Ok(v >= self.rv),
                    Valuation::ZeroModPrecision(c) => {
                        if c >= self.rv {
                            Ok(true)
                        } else {
                            Err(Error::PrecisionExhausted(format!(
                                "membership in ball of radius parameter {} undecidable \
                                 at precision t^{}",
                                rat_to_string(&self.rv),
                                rat_to_string(&c)
                            )))
                        }
                    }
                }
            }
        }
    }

    /// Inclusion order between two balls. Exact (canonical centers are
    /// exact polynomials).
    pub fn compare(&self, other: &Self) -> BallOrder {
        let diff = self.center.sub(&other.center);
        let close_enough = |r: &Rat| match diff.val() {
            Valuation::Infinite => true,
            Valuation::Finite(v) => &v >= r,
            Valuation::ZeroModPrecision(_) => unreachable!("canonical centers are exact"),
        };
        match self.rv.cmp(&other.rv) {
            Ordering::Equal if close_enough(&self.rv) => BallOrder::Equal,
            Ordering::Less if close_enough(&self.rv) => BallOrder::Ancestor,
            Ordering::Greater if close_enough(&other.rv) => BallOrder::Descendant,
            _ => BallOrder::Incomparable,
        }
    }

    /// Smallest ball containing both.
    pub fn join(&self, other: &Self) -> Self {
        let mut r = self.rv.clone().min(other.rv.clone());
        if let Valuation::Finite(v) = self.center.sub(&other.center).val() {
            r = r.min(v);
        }
        TypeIIPoint::new(&self.center, r).expect("canonical center is exact")
    }

    /// Deterministic total order (radius parameter, then center data); used
    /// to fix enumeration orders.
    pub fn cmp_det(&self, other: &Self) -> Ordering {
        self.rv
            .cmp(&other.rv)
            .then_with(|| self.center.cmp_lex(&other.center))
    }

    /// The canonical chart triple `(c, c + t^rv, ∞)` of this ball: the
    /// Moebius map sending `(0, 1, ∞)` to it maps the Gauss point to this
    /// point.
    pub fn chart_triple(&self) -> [PointP1L; 3] {
        let second = self.center.add(&PuiseuxSeries::t_pow(self.rv.clone()));
        [
            PointP1L::Finite(self.center.clone()),
            PointP1L::Finite(second),
            PointP1L::Infinity,
        ]
    }
}

impl fmt::Display for TypeIIPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}; {}>", self.center, rat_to_string(&self.rv))
    }
}

/// Certified equality of projective points. Fails when the difference of
/// two finite points is zero modulo precision but not exactly zero.
pub fn same_point(p: &PointP1L, q: &PointP1L) -> Result<bool> {
    match (p, q) {
        (PointP1L::Infinity, PointP1L::Infinity) => Ok(true),
        (PointP1L::Infinity, _) | (_, PointP1L::Infinity) => Ok(false),
        (PointP1L::Finite(a), PointP1L::Finite(b)) => match a.sub(b).val() {
            Valuation::Infinite => Ok(true),
            Valuation::Finite(_) => Ok(false),
            Valuation::ZeroModPrecision(c) => Err(Error::PrecisionExhausted(format!(
                "point equality undecidable: difference is zero modulo t^{}",
                rat_to_string(&c)
            ))),
        },
    }
}

/// Valuation of the difference of two finite points; errors are phrased for
/// separating-vertex computations.
fn diff_val(a: &PuiseuxSeries, b: &PuiseuxSeries, what: &str) -> Result<Rat> {
    a.sub(b).val().finite_or(
        Error::SamePoint(format!("{what}: the two points coincide")),
        what,
    )
}

/// The vertex separating three pairwise distinct points of the projective
/// line: the unique type-II point at which the three points lie in three
/// distinct directions (the median of their tripod).
///
/// This is the smallest ball containing the *closest* pair — the pair with
/// maximal valuation distance — so its radius parameter is that maximal
/// pairwise valuation. With `∞` among the points, the two finite points are
/// automatically the closest pair and the vertex is their join.
pub fn separating_vertex(a: &PointP1L, b: &PointP1L, c: &PointP1L) -> Result<TypeIIPoint> {
    use PointP1L::{Finite, Infinity};
    let inf_count = [a, b, c].iter().filter(|p| p.is_infinity()).count();
    if inf_count >= 2 {
        return Err(Error::SamePoint(
            "separating vertex: at least two of the points are infinity".into(),
        ));
    }
    match (a, b, c) {
        (Finite(x), Finite(y), Infinity)
        | (Finite(x), Infinity, Finite(y))
        | (Infinity, Finite(x), Finite(y)) => {
            let w = diff_val(x, y, "separating vertex")?;
            TypeIIPoint::new(x, w)
        }
        (Finite(x), Finite(y), Finite(z)) => {
            let wxy = diff_val(x, y, "separating vertex")?;
            let wyz = diff_val(y, z, "separating vertex")?;
            let wxz = diff_val(x, z, "separating vertex")?;
            // The two smaller valuations agree (ultrametric); the vertex is
            // the join of the pair attaining the maximum.
            let (center, w, other1, other2) = if wxy >= wyz && wxy >= wxz {
                (x, wxy, wyz, wxz)
            } else if wyz >= wxy && wyz >= wxz {
                (y, wyz, wxy, wxz)
            } else {
                (x, wxz, wxy, wyz)
            };
            debug_assert_eq!(other1, other2, "ultrametric: the two smaller valuations agree");
            TypeIIPoint::new(center, w)
        }
        _ => unreachable!("at most one infinity remains"),
    }
}

/// Extended reduction to the residue sphere: the constant coefficient for
/// integral series, `∞` for series of negative valuation.
///
/// Fails when the constant coefficient is not determined at the working
/// precision.
pub fn reduce_hat(s: &PuiseuxSeries) -> Result<CP1> {
    match s.val() {
        Valuation::Finite(v) if v < Rat::from_integer(0.into()) => Ok(CP1::Infinity),
        _ => match s.coeff_at(&Rat::from_integer(0.into())) {
            Some(c) => Ok(CP1::Finite(c)),
            None => Err(Error::PrecisionExhausted(
                "reduction: constant coefficient not covered by the cutoff".into(),
            )),
        },
    }
}

/// Reduction of a projective point (`∞` reduces to `∞`).
pub fn reduce_point(p: &PointP1L) -> Result<CP1> {
    match p {
        PointP1L::Infinity => Ok(CP1::Infinity),
        PointP1L::Finite(s) => reduce_hat(s),
    }
}

/// The direction at a vertex in which a point lies: the reduction of the
/// point in the vertex's canonical chart. Points outside the ball land in
/// the direction `∞`; points inside land in the residue class of
/// `(p - center)/t^rv`.
pub fn direction_at(vertex: &TypeIIPoint, p: &PointP1L) -> Result<CP1> {
    match p {
        PointP1L::Infinity => Ok(CP1::Infinity),
        PointP1L::Finite(s) => {
            let shifted = s.sub(vertex.center()).shift(&-vertex.rv().clone());
            reduce_hat(&shifted)
        }
    }
}

/// The direction at `vertex` toward another vertex of a tree.
///
/// Strict descendants determine a finite residue direction through their
/// center; ancestors and disjoint vertices lie beyond the ball, in the
/// direction `∞`.
pub fn direction_at_vertex(vertex: &TypeIIPoint, toward: &TypeIIPoint) -> Result<CP1> {
    match vertex.compare(toward) {
        BallOrder::Equal => Err(Error::SamePoint(
            "direction toward the vertex itself is undefined".into(),
        )),
        BallOrder::Ancestor => {
            direction_at(vertex, &PointP1L::Finite(toward.center().clone()))
        }
        BallOrder::Descendant | BallOrder::Incomparable => Ok(CP1::Infinity),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int, ExactComplex};
    use crate::puiseux::{series_int, t_rat, Series, Term};

    fn pt(s: PuiseuxSeries) -> PointP1L {
        PointP1L::Finite(s)
    }

    fn ball(center: PuiseuxSeries, p: i64, q: i64) -> TypeIIPoint {
        TypeIIPoint::new(&center, rat(p, q)).unwrap()
    }

    #[test]
    fn canonical_form_drops_high_center_terms() {
        let c = t_rat(2, 1).add(&t_rat(5, 1));
        let b = ball(c, 3, 1);
        assert_eq!(b.center(), &t_rat(2, 1));
        // Same ball from a different representative.
        let c2 = t_rat(2, 1).add(&t_rat(7, 2));
        assert_eq!(ball(c2, 3, 1), b);
    }

    #[test]
    fn canonicalization_needs_enough_precision() {
        let c = t_rat(1, 1).truncated(crate::puiseux::Cutoff::Finite(rat_int(2)));
        let e = TypeIIPoint::new(&c, rat_int(3)).unwrap_err();
        assert_eq!(e.code(), "PRECISION_EXHAUSTED");
        // Knowing the center up to exactly rv is enough.
        assert!(TypeIIPoint::new(&c, rat_int(2)).is_ok());
    }

    #[test]
    fn gauss_ball_membership() {
        let g = TypeIIPoint::gauss();
        assert!(g.contains_point(&PointP1L::zero()).unwrap());
        assert!(g.contains_point(&pt(t_rat(1, 1))).unwrap());
        assert!(g
            .contains_point(&pt(series_int(1).add(&t_rat(1, 1))))
            .unwrap());
        assert!(!g.contains_point(&pt(t_rat(-1, 1))).unwrap());
        assert!(!g.contains_point(&PointP1L::Infinity).unwrap());
    }

    #[test]
    fn membership_can_be_undecidable() {
        let b = ball(PuiseuxSeries::zero(), 5, 1);
        let fuzzy = PuiseuxSeries::from_terms(vec![], crate::puiseux::Cutoff::Finite(rat_int(2)));
        let e = b.contains_point(&pt(fuzzy)).unwrap_err();
        assert_eq!(e.code(), "PRECISION_EXHAUSTED");
    }

    #[test]
    fn equal_balls_from_shifted_centers() {
        // B(0,1) = B(t,1): centers differ by t with v(t) = 1 >= 1.
        let a = ball(PuiseuxSeries::zero(), 1, 1);
        let b = ball(t_rat(1, 1), 1, 1);
        assert_eq!(a, b);
        assert_eq!(a.compare(&b), BallOrder::Equal);
    }

    #[test]
    fn inclusion_order() {
        let gauss = TypeIIPoint::gauss();
        let inner = ball(PuiseuxSeries::zero(), 1, 1);
        let other = ball(series_int(1), 1, 1);
        assert_eq!(gauss.compare(&inner), BallOrder::Ancestor);
        assert_eq!(inner.compare(&gauss), BallOrder::Descendant);
        assert_eq!(inner.compare(&other), BallOrder::Incomparable);
        assert_eq!(gauss.compare(&other), BallOrder::Ancestor);
    }

    #[test]
    fn join_of_disjoint_balls() {
        let a = ball(PuiseuxSeries::zero(), 2, 1);
        let b = ball(series_int(1), 3, 1);
        // Centers differ by a unit: join is the Gauss point.
        assert_eq!(a.join(&b), TypeIIPoint::gauss());
        // Join with an ancestor is the ancestor.
        let g = TypeIIPoint::gauss();
        assert_eq!(a.join(&g), g);
        assert_eq!(g.join(&a), g);
        assert_eq!(a.join(&a), a);
    }

    #[test]
    fn separating_three_units() {
        // 0, t, 1: the closest pair is (0, t) at valuation 1, so the vertex
        // is B(0, 1); there 0 ↦ 0, t ↦ 1 and 1 ↦ ∞.
        let v = separating_vertex(&PointP1L::zero(), &pt(t_rat(1, 1)), &PointP1L::one()).unwrap();
        assert_eq!(v, ball(PuiseuxSeries::zero(), 1, 1));
        assert_eq!(direction_at(&v, &PointP1L::zero()).unwrap(), CP1::zero());
        assert_eq!(direction_at(&v, &pt(t_rat(1, 1))).unwrap(), CP1::one());
        assert_eq!(direction_at(&v, &PointP1L::one()).unwrap(), CP1::Infinity);
    }

    #[test]
    fn separating_with_infinity() {
        let v =
            separating_vertex(&PointP1L::zero(), &pt(t_rat(1, 1)), &PointP1L::Infinity).unwrap();
        assert_eq!(v, ball(PuiseuxSeries::zero(), 1, 1));
        let w = separating_vertex(&PointP1L::zero(), &PointP1L::one(), &PointP1L::Infinity)
            .unwrap();
        assert_eq!(w, TypeIIPoint::gauss());
    }

    #[test]
    fn separating_large_points() {
        // 1/t, 0, 1: pairwise valuations are -1, -1 and 0, so the closest
        // pair is (0, 1) and the vertex is the Gauss point, where 1/t sits
        // in the direction ∞.
        let v = separating_vertex(&pt(t_rat(-1, 1)), &PointP1L::zero(), &PointP1L::one()).unwrap();
        assert_eq!(v, TypeIIPoint::gauss());
        assert_eq!(
            direction_at(&v, &pt(t_rat(-1, 1))).unwrap(),
            CP1::Infinity
        );
    }

    #[test]
    fn separating_deep_pair() {
        // t^2, t^2 + t^3, 1: the closest pair has valuation 3 and the vertex
        // is B(t^2, 3), whose canonical center keeps the term t^2.
        let v = separating_vertex(
            &pt(t_rat(2, 1)),
            &pt(t_rat(2, 1).add(&t_rat(3, 1))),
            &PointP1L::one(),
        )
        .unwrap();
        assert_eq!(v, ball(t_rat(2, 1), 3, 1));
        // All three directions are distinct there.
        let d0 = direction_at(&v, &pt(t_rat(2, 1))).unwrap();
        let d1 = direction_at(&v, &pt(t_rat(2, 1).add(&t_rat(3, 1)))).unwrap();
        let d2 = direction_at(&v, &PointP1L::one()).unwrap();
        assert_eq!(d0, CP1::zero());
        assert_eq!(d1, CP1::one());
        assert_eq!(d2, CP1::Infinity);
    }

    #[test]
    fn separating_rejects_coincident_points() {
        let e = separating_vertex(&PointP1L::zero(), &PointP1L::zero(), &PointP1L::one())
            .unwrap_err();
        assert_eq!(e.code(), "SAME_POINT");
        let e2 = separating_vertex(
            &PointP1L::Infinity,
            &PointP1L::Infinity,
            &PointP1L::zero(),
        )
        .unwrap_err();
        assert_eq!(e2.code(), "SAME_POINT");
    }

    #[test]
    fn separating_is_symmetric() {
        let pts = [pt(t_rat(-1, 1)), pt(t_rat(1, 1)), PointP1L::one()];
        let base = separating_vertex(&pts[0], &pts[1], &pts[2]).unwrap();
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        for p in perms {
            let v = separating_vertex(&pts[p[0]], &pts[p[1]], &pts[p[2]]).unwrap();
            assert_eq!(v, base);
        }
    }

    #[test]
    fn reduction_cases() {
        assert_eq!(reduce_hat(&series_int(2).add(&t_rat(1, 1))).unwrap(), CP1::from_int(2));
        assert_eq!(reduce_hat(&t_rat(1, 2)).unwrap(), CP1::zero());
        assert_eq!(reduce_hat(&t_rat(-1, 1)).unwrap(), CP1::Infinity);
        assert_eq!(reduce_hat(&PuiseuxSeries::zero()).unwrap(), CP1::zero());
        let fuzzy = PuiseuxSeries::from_terms(vec![], crate::puiseux::Cutoff::Finite(rat(0, 1)));
        assert_eq!(
            reduce_hat(&fuzzy).unwrap_err().code(),
            "PRECISION_EXHAUSTED"
        );
    }

    #[test]
    fn directions_at_the_gauss_point() {
        let g = TypeIIPoint::gauss();
        assert_eq!(direction_at(&g, &PointP1L::zero()).unwrap(), CP1::zero());
        assert_eq!(direction_at(&g, &pt(t_rat(1, 1))).unwrap(), CP1::zero());
        assert_eq!(direction_at(&g, &PointP1L::one()).unwrap(), CP1::one());
        assert_eq!(
            direction_at(&g, &pt(series_int(1).add(&t_rat(1, 1)))).unwrap(),
            CP1::one()
        );
        assert_eq!(direction_at(&g, &PointP1L::Infinity).unwrap(), CP1::Infinity);
        assert_eq!(direction_at(&g, &pt(t_rat(-1, 1))).unwrap(), CP1::Infinity);
    }

    #[test]
    fn directions_in_a_small_ball() {
        let b = ball(PuiseuxSeries::zero(), 1, 1);
        // 1 is outside the ball.
        assert_eq!(direction_at(&b, &PointP1L::one()).unwrap(), CP1::Infinity);
        // t is the residue direction 1 (since t/t = 1), 2t direction 2.
        assert_eq!(direction_at(&b, &pt(t_rat(1, 1))).unwrap(), CP1::one());
        let two_t = t_rat(1, 1).scale(&ExactComplex::from_int(2));
        assert_eq!(direction_at(&b, &pt(two_t)).unwrap(), CP1::from_int(2));
        assert_eq!(direction_at(&b, &PointP1L::zero()).unwrap(), CP1::zero());
    }

    #[test]
    fn directions_between_vertices() {
        let g = TypeIIPoint::gauss();
        let inner = ball(t_rat(1, 1).add(&series_int(1)), 2, 1); // B(1 + t, 2)
        assert_eq!(direction_at_vertex(&g, &inner).unwrap(), CP1::one());
        assert_eq!(direction_at_vertex(&inner, &g).unwrap(), CP1::Infinity);
        let sibling = ball(PuiseuxSeries::zero(), 2, 1);
        assert_eq!(direction_at_vertex(&inner, &sibling).unwrap(), CP1::Infinity);
        assert_eq!(
            direction_at_vertex(&g, &g).unwrap_err().code(),
            "SAME_POINT"
        );
    }

    #[test]
    fn chart_triple_separates_to_the_vertex() {
        let b = TypeIIPoint::new(
            &Series::from_terms_exact(vec![
                Term {
                    exp: rat(-1, 1),
                    coef: ExactComplex::from_int(1),
                },
                Term {
                    exp: rat(1, 2),
                    coef: ExactComplex::from_int(3),
                },
            ]),
            rat(3, 2),
        )
        .unwrap();
        let [p, q, r] = b.chart_triple();
        assert_eq!(separating_vertex(&p, &q, &r).unwrap(), b);
    }
}
