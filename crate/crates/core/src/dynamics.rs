//! Iteration of type-II points and rescaling limits.
//!
//! A rational map over the series field acts on type-II points through
//! images of balls. Orbits are recorded until they revisit a point, leave
//! a prescribed tree of spheres, or exhaust the step budget. Around a
//! periodic cycle the tangent maps between consecutive residue spheres
//! compose to a *limit map* — the rescaling limit at the cycle's
//! basepoint — which is classified by its shape: a monomial, another
//! degree-one map, or a genuinely nonlinear (interesting) limit.

use crate::berkline::TypeIIPoint;
use crate::cpoly::RatFn;
use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::ratmap::RationalMapL;
use crate::trees::{check_compatible, MarkedFamily, TreeOfSpheres};

/// How an orbit computation ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitStatus {
    /// The orbit revisited `points[entry]`; the cycle has the given period.
    Periodic { entry: usize, period: usize },
    /// The step budget ran out before any repetition.
    StoppedAtBudget,
    /// The orbit left the supplied tree; `points[exit]` is the first point
    /// outside it.
    LeftTree { exit: usize },
}

/// An orbit of type-II points, recorded through its first repetition.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub points: Vec<TypeIIPoint>,
    pub status: OrbitStatus,
}

/// Iterate the induced map on type-II points, for at most `max_steps`
/// images. With a tree supplied, iteration also stops at the first image
/// that is not one of its vertices.
pub fn orbit_typeii(
    map: &RationalMapL,
    start: &TypeIIPoint,
    tree: Option<&TreeOfSpheres>,
    max_steps: usize,
    budget: &Rat,
) -> Result<OrbitRecord> {
    let mut points = vec![start.clone()];
    for _ in 0..max_steps {
        let next = map.image_typeii(points.last().unwrap(), budget)?;
        if let Some(entry) = points.iter().position(|p| p == &next) {
            let period = points.len() - entry;
            points.push(next);
            return Ok(OrbitRecord {
                points,
                status: OrbitStatus::Periodic { entry, period },
            });
        }
        points.push(next);
        if let Some(tree) = tree {
            if tree.vertex_index(points.last().unwrap()).is_none() {
                let exit = points.len() - 1;
                return Ok(OrbitRecord {
                    points,
                    status: OrbitStatus::LeftTree { exit },
                });
            }
        }
    }
    Ok(OrbitRecord {
        points,
        status: OrbitStatus::StoppedAtBudget,
    })
}

/// Shape of a rescaling limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RescalingClass {
    /// The limit is a monomial `c·u^±k`.
    Monomial,
    /// Degree one, but not a monomial.
    DegreeOne,
    /// Degree at least two and not a monomial.
    Interesting,
}

/// A periodic cycle of type-II points with its tangent maps, their
/// composite around the cycle (the limit at `cycle[0]`), and the limit's
/// classification.
#[derive(Debug, Clone)]
pub struct RescalingCycle {
    pub cycle: Vec<TypeIIPoint>,
    pub tangent_maps: Vec<RatFn>,
    pub limit: RatFn,
    pub classification: RescalingClass,
}

fn classify(limit: &RatFn) -> RescalingClass {
    if limit.is_monomial_map() {
        RescalingClass::Monomial
    } else if limit.map_degree() == 1 {
        RescalingClass::DegreeOne
    } else {
        RescalingClass::Interesting
    }
}

/// Tangent maps and limit for a cycle given in orbit order.
fn cycle_record(
    map: &RationalMapL,
    cycle: Vec<TypeIIPoint>,
) -> Result<RescalingCycle> {
    let p = cycle.len();
    let mut tangent_maps = Vec::with_capacity(p);
    for i in 0..p {
        tangent_maps.push(map.tangent_map(&cycle[i], &cycle[(i + 1) % p])?);
    }
    let mut limit = tangent_maps[0].clone();
    for f in &tangent_maps[1..] {
        limit = f.compose(&limit)?;
    }
    debug_assert_eq!(
        limit.map_degree(),
        tangent_maps.iter().map(RatFn::map_degree).product::<usize>(),
        "the limit degree is the product of the local degrees"
    );
    let classification = classify(&limit);
    Ok(RescalingCycle {
        cycle,
        tangent_maps,
        limit,
        classification,
    })
}

/// Rotate a cycle so that its smallest point (in the deterministic order)
/// comes first.
fn normalize_rotation(mut cycle: Vec<TypeIIPoint>) -> Vec<TypeIIPoint> {
    let m = cycle
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.cmp_det(b))
        .map(|(i, _)| i)
        .unwrap_or(0);
    cycle.rotate_left(m);
    cycle
}

/// Find the periodic cycles reachable from the given seed points and
/// return one rescaling record per distinct cycle, deterministically
/// ordered. Seeds whose orbit does not close up within `max_steps` are
/// skipped.
pub fn find_rescalings(
    map: &RationalMapL,
    seeds: &[TypeIIPoint],
    max_steps: usize,
    budget: &Rat,
) -> Result<Vec<RescalingCycle>> {
    let mut cycles: Vec<Vec<TypeIIPoint>> = Vec::new();
    let mut done_seeds: Vec<&TypeIIPoint> = Vec::new();
    for seed in seeds {
        if done_seeds.contains(&seed) {
            continue;
        }
        done_seeds.push(seed);
        let orbit = orbit_typeii(map, seed, None, max_steps, budget)?;
        if let OrbitStatus::Periodic { entry, period } = orbit.status {
            let cycle =
                normalize_rotation(orbit.points[entry..entry + period].to_vec());
            if !cycles.contains(&cycle) {
                cycles.push(cycle);
            }
        }
    }
    cycles.sort_by(|a, b| a[0].cmp_det(&b[0]));
    cycles
        .into_iter()
        .map(|c| cycle_record(map, c))
        .collect()
}

/// The rescaling limit at a prescribed basepoint, which must be periodic;
/// the cycle is reported starting at the basepoint.
pub fn rescaling_at_basepoint(
    map: &RationalMapL,
    base: &TypeIIPoint,
    max_steps: usize,
    budget: &Rat,
) -> Result<RescalingCycle> {
    let orbit = orbit_typeii(map, base, None, max_steps, budget)?;
    match orbit.status {
        OrbitStatus::Periodic { entry: 0, period } => {
            cycle_record(map, orbit.points[..period].to_vec())
        }
        OrbitStatus::Periodic { entry, .. } => Err(Error::Indeterminate(format!(
            "basepoint {base} is preperiodic: it reaches a cycle after \
             {entry} steps without returning"
        ))),
        _ => Err(Error::Indeterminate(format!(
            "the orbit of {base} does not return within {max_steps} steps"
        ))),
    }
}

/// A marked dynamical situation: the tree of all marked points upstairs,
/// the tree of the forward-marked set downstairs, and the embedding of the
/// downstairs tree into the upstairs one.
#[derive(Debug, Clone)]
pub struct SphereDynamics {
    pub map: RationalMapL,
    pub source: TreeOfSpheres,
    pub target: TreeOfSpheres,
    /// For each target vertex, the source vertex with the same ball.
    pub embed: Vec<usize>,
}

/// Build the two limiting trees and check that the downstairs tree embeds
/// in the upstairs one (every downstairs marked point must appear upstairs
/// under some label, and every downstairs vertex must be an upstairs
/// vertex).
pub fn build_dynamics(
    map: RationalMapL,
    upstairs: &MarkedFamily,
    downstairs: &MarkedFamily,
) -> Result<SphereDynamics> {
    let source = TreeOfSpheres::limit_tree(upstairs)?;
    let target = TreeOfSpheres::limit_tree(downstairs)?;
    let embed = check_compatible(&source, &target)?;
    Ok(SphereDynamics {
        map,
        source,
        target,
        embed,
    })
}

impl SphereDynamics {
    /// One step of the induced map on downstairs vertices: the image ball
    /// and, if it is still a downstairs vertex, its index.
    pub fn iterate_vertex(
        &self,
        i: usize,
        budget: &Rat,
    ) -> Result<(TypeIIPoint, Option<usize>)> {
        let image = self
            .map
            .image_typeii(&self.target.vertices[i].point, budget)?;
        let idx = self.target.vertex_index(&image);
        Ok((image, idx))
    }

    /// Orbit of a downstairs vertex inside the downstairs tree.
    pub fn orbit_of_vertex(
        &self,
        i: usize,
        max_steps: usize,
        budget: &Rat,
    ) -> Result<OrbitRecord> {
        orbit_typeii(
            &self.map,
            &self.target.vertices[i].point,
            Some(&self.target),
            max_steps,
            budget,
        )
    }

    /// Rescaling cycles seeded at every downstairs vertex.
    pub fn rescalings(&self, max_steps: usize, budget: &Rat) -> Result<Vec<RescalingCycle>> {
        let seeds: Vec<TypeIIPoint> = self
            .target
            .vertices
            .iter()
            .map(|v| v.point.clone())
            .collect();
        find_rescalings(&self.map, &seeds, max_steps, budget)
    }
}
