//! Seeded random generators shared by the acceptance suite.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use berktrees::berkline::PointP1L;
use berktrees::exact::{rat, ExactComplex, Rat};
use berktrees::moebius::MoebiusL;
use berktrees::puiseux::{PuiseuxSeries, Term};
use berktrees::ratmap::{LPoly, RationalMapL};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random rational with numerator in `lo..=hi` and denominator in `1..=qmax`.
pub fn rand_rat(r: &mut ChaCha8Rng, lo: i64, hi: i64, qmax: i64) -> Rat {
    rat(r.gen_range(lo..=hi), r.gen_range(1..=qmax))
}

/// Random Gaussian-rational coefficient with entries bounded by `m`.
pub fn rand_coeff(r: &mut ChaCha8Rng, m: i64) -> ExactComplex {
    ExactComplex::new(rand_rat(r, -m, m, 2), rand_rat(r, -m, m, 2))
}

/// Random exact series with up to `terms` terms and exponents in
/// `elo..=ehi` (denominators up to `qmax`).
pub fn rand_series(
    r: &mut ChaCha8Rng,
    terms: usize,
    elo: i64,
    ehi: i64,
    qmax: i64,
) -> PuiseuxSeries {
    let n = r.gen_range(0..=terms);
    PuiseuxSeries::from_terms_exact(
        (0..n)
            .map(|_| Term {
                exp: rand_rat(r, elo, ehi, qmax),
                coef: rand_coeff(r, 4),
            })
            .collect(),
    )
}

/// Random monomial `c·t^e` with integer exponent in `elo..=ehi`; zero with
/// roughly one chance in four.
pub fn rand_monomial(r: &mut ChaCha8Rng, elo: i64, ehi: i64) -> PuiseuxSeries {
    if r.gen_range(0..4) == 0 {
        return PuiseuxSeries::zero();
    }
    let c = loop {
        let c = r.gen_range(-3i64..=3);
        if c != 0 {
            break c;
        }
    };
    PuiseuxSeries::monomial(rat(r.gen_range(elo..=ehi), 1), ExactComplex::from_int(c))
}

/// Random rational map of degree between 1 and `max_deg` with monomial
/// coefficients, retried until the coprimality certificate succeeds.
pub fn rand_map(r: &mut ChaCha8Rng, max_deg: usize) -> RationalMapL {
    loop {
        let dn = r.gen_range(0..=max_deg);
        let dd = r.gen_range(0..=max_deg);
        if dn.max(dd) == 0 {
            continue;
        }
        let poly = |r: &mut ChaCha8Rng, d: usize| {
            let mut coeffs: Vec<PuiseuxSeries> =
                (0..=d).map(|_| rand_monomial(r, -2, 2)).collect();
            if coeffs[d].is_exactly_zero() {
                coeffs[d] = PuiseuxSeries::one();
            }
            LPoly::from_coeffs(coeffs)
        };
        let num = poly(r, dn);
        let den = poly(r, dd);
        if let Ok(map) = RationalMapL::new(num, den) {
            return map;
        }
    }
}

/// Random invertible Moebius transformation with monomial entries.
pub fn rand_moebius(r: &mut ChaCha8Rng) -> MoebiusL {
    loop {
        let m = MoebiusL::new(
            rand_monomial(r, -2, 2),
            rand_monomial(r, -2, 2),
            rand_monomial(r, -2, 2),
            rand_monomial(r, -2, 2),
        );
        if let Ok(m) = m {
            return m;
        }
    }
}

/// Random family of `n` pairwise distinct marked points; at most one is
/// infinite.
pub fn rand_points(r: &mut ChaCha8Rng, n: usize) -> Vec<PointP1L> {
    let mut points: Vec<PointP1L> = Vec::new();
    while points.len() < n {
        let candidate = if points.iter().all(|p| !matches!(p, PointP1L::Infinity))
            && r.gen_range(0..4) == 0
        {
            PointP1L::Infinity
        } else {
            PointP1L::Finite(rand_series(r, 3, -2, 2, 2))
        };
        let fresh = points.iter().all(|p| {
            berktrees::berkline::same_point(p, &candidate)
                .map(|same| !same)
                .unwrap_or(false)
        });
        if fresh {
            points.push(candidate);
        }
    }
    points
}
