//! Limiting trees of marked spheres and covers between them.
//!
//! A family of at least three pairwise distinct marked points of the
//! projective line over the series field determines a finite tree of
//! type-II points: the vertices are the separating vertices of the marked
//! triples (the branch points of the convex hull of the marked points),
//! and two vertices are adjacent when no third vertex lies between them on
//! the Berkovich tree. Each vertex carries a sphere, and every marked
//! point reduces to a direction on it.
//!
//! A rational map together with a portrait (a label map with local
//! degrees) induces a cover between the upstairs and downstairs trees:
//! vertices map by the image of balls, and each vertex carries the tangent
//! map between the residue spheres in canonical charts. `verify_cover`
//! checks the covering conditions exactly: commuting diagrams on marked
//! directions and edges, matching local degrees from both ends of every
//! edge, portrait degrees at directly attached leaves, fiber degree sums,
//! surjectivity, per-sphere ramification accounting, and marked critical
//! values.

use std::collections::BTreeMap;

use crate::berkline::{
    direction_at, direction_at_vertex, same_point, separating_vertex, BallOrder, PointP1L,
    TypeIIPoint,
};
use crate::cpoly::RatFn;
use crate::error::{Error, Result};
use crate::exact::{Rat, CP1};
use crate::puiseux::Valuation;
use crate::ratmap::{distinct_preimages, local_mult_at, RationalMapL};

/// Labelled points of the projective line over the series field.
#[derive(Debug, Clone)]
pub struct MarkedFamily {
    pub labels: Vec<String>,
    pub points: Vec<PointP1L>,
}

impl MarkedFamily {
    pub fn new(labels: Vec<String>, points: Vec<PointP1L>) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::FamilyIncompatible(format!(
                "{} labels but {} points",
                labels.len(),
                points.len()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::FamilyIncompatible(format!(
                    "duplicate label {a:?}"
                )));
            }
        }
        Ok(MarkedFamily { labels, points })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&PointP1L> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.points[i])
    }
}

/// A sphere of a limiting tree: its type-II point and the direction of
/// every marked point on it (indexed like the tree's labels).
#[derive(Debug, Clone)]
pub struct SphereVertex {
    pub point: TypeIIPoint,
    pub marking: Vec<CP1>,
}

/// The limiting tree of spheres of a marked family.
#[derive(Debug, Clone)]
pub struct TreeOfSpheres {
    pub labels: Vec<String>,
    pub points: Vec<PointP1L>,
    pub vertices: Vec<SphereVertex>,
    pub edges: Vec<(usize, usize)>,
}

/// Whether `u` lies strictly between the vertices `a` and `b` on the
/// Berkovich tree (on the path through their join, excluding endpoints).
fn between_vertices(u: &TypeIIPoint, a: &TypeIIPoint, b: &TypeIIPoint) -> bool {
    if u == a || u == b {
        return false;
    }
    let join = a.join(b);
    let on_segment = |lower: &TypeIIPoint| {
        let above_lower = matches!(u.compare(lower), BallOrder::Ancestor | BallOrder::Equal);
        let below_join = matches!(join.compare(u), BallOrder::Ancestor | BallOrder::Equal);
        above_lower && below_join
    };
    on_segment(a) || on_segment(b)
}

/// Whether the vertex `u` lies strictly between the vertex `v` and the
/// projective point `p` (a leaf of the tree).
fn between_vertex_and_point(u: &TypeIIPoint, v: &TypeIIPoint, p: &PointP1L) -> Result<bool> {
    if u == v {
        return Ok(false);
    }
    match p {
        PointP1L::Infinity => Ok(matches!(u.compare(v), BallOrder::Ancestor)),
        PointP1L::Finite(y) => {
            if v.contains_point(p)? {
                Ok(matches!(v.compare(u), BallOrder::Ancestor) && u.contains_point(p)?)
            } else {
                // The path climbs from v to the join with the leaf and
                // descends again.
                let jr = y.sub(v.center()).val().finite_or(
                    Error::SamePoint("leaf coincides with a vertex center".into()),
                    "leaf path",
                )?;
                let join = TypeIIPoint::new(v.center(), jr)?;
                let below_join =
                    matches!(join.compare(u), BallOrder::Ancestor | BallOrder::Equal);
                let above_v = matches!(u.compare(v), BallOrder::Ancestor);
                Ok(below_join && (above_v || u.contains_point(p)?))
            }
        }
    }
}

impl TreeOfSpheres {
    /// The limiting tree of a family of at least three pairwise distinct
    /// marked points.
    pub fn limit_tree(family: &MarkedFamily) -> Result<Self> {
        let n = family.len();
        if n < 3 {
            return Err(Error::NotDistinct(
                "a limiting tree needs at least three marked points".into(),
            ));
        }
        for i in 0..n {
            for j in i + 1..n {
                if same_point(&family.points[i], &family.points[j])? {
                    return Err(Error::NotDistinct(format!(
                        "marked points {:?} and {:?} coincide",
                        family.labels[i], family.labels[j]
                    )));
                }
            }
        }
        let mut balls: Vec<TypeIIPoint> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = separating_vertex(
                        &family.points[i],
                        &family.points[j],
                        &family.points[k],
                    )?;
                    if !balls.contains(&s) {
                        balls.push(s);
                    }
                }
            }
        }
        balls.sort_by(|a, b| a.cmp_det(b));
        let vertices = balls
            .iter()
            .map(|b| {
                let marking = family
                    .points
                    .iter()
                    .map(|p| direction_at(b, p))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SphereVertex {
                    point: b.clone(),
                    marking,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut edges = Vec::new();
        for i in 0..balls.len() {
            for j in i + 1..balls.len() {
                let blocked = balls
                    .iter()
                    .any(|u| between_vertices(u, &balls[i], &balls[j]));
                if !blocked {
                    edges.push((i, j));
                }
            }
        }
        let tree = TreeOfSpheres {
            labels: family.labels.clone(),
            points: family.points.clone(),
            vertices,
            edges,
        };
        tree.debug_validate();
        Ok(tree)
    }

    fn debug_validate(&self) {
        if !cfg!(debug_assertions) {
            return;
        }
        assert_eq!(
            self.edges.len() + 1,
            self.vertices.len(),
            "vertex/edge count must form a tree"
        );
        // Connectivity.
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        assert!(seen.iter().all(|&s| s), "tree must be connected");
        for i in 0..self.vertices.len() {
            let dirs = self.directions_at(i).expect("directions");
            assert!(dirs.len() >= 3, "every sphere carries at least three directions");
            // Edges leave in pairwise distinct directions.
            let edge_dirs: Vec<CP1> = self
                .neighbors(i)
                .iter()
                .map(|&j| self.edge_direction(i, j).expect("edge direction"))
                .collect();
            for (a, da) in edge_dirs.iter().enumerate() {
                assert!(
                    !edge_dirs[..a].contains(da),
                    "edges at a vertex attach at distinct directions"
                );
            }
        }
    }

    pub fn vertex_index(&self, ball: &TypeIIPoint) -> Option<usize> {
        self.vertices.iter().position(|v| &v.point == ball)
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Direction at vertex `from` toward vertex `to`.
    pub fn edge_direction(&self, from: usize, to: usize) -> Result<CP1> {
        direction_at_vertex(&self.vertices[from].point, &self.vertices[to].point)
    }

    /// The distinct directions occupied at a vertex by marked points and
    /// edges.
    pub fn directions_at(&self, i: usize) -> Result<Vec<CP1>> {
        let mut dirs: Vec<CP1> = Vec::new();
        for d in &self.vertices[i].marking {
            if !dirs.contains(d) {
                dirs.push(d.clone());
            }
        }
        for j in self.neighbors(i) {
            let d = self.edge_direction(i, j)?;
            if !dirs.contains(&d) {
                dirs.push(d);
            }
        }
        Ok(dirs)
    }

    /// Whether the marked point attaches to this vertex by a leaf edge,
    /// with no other vertex between them.
    pub fn attaches_directly(&self, vertex: usize, label: usize) -> Result<bool> {
        let v = &self.vertices[vertex].point;
        let p = &self.points[label];
        for (k, u) in self.vertices.iter().enumerate() {
            if k != vertex && between_vertex_and_point(&u.point, v, p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The combinatorial data of a cover: which marked point maps where, with
/// what local degree, and the global degree.
#[derive(Debug, Clone)]
pub struct Portrait {
    pub degree: usize,
    pub label_map: BTreeMap<String, String>,
    pub local_degrees: BTreeMap<String, u32>,
}

/// Outcome of validating a portrait; empty violations mean valid.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Portrait {
    /// Check internal consistency: positive degrees, fibers summing to the
    /// global degree, and the Riemann–Hurwitz bound.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.degree == 0 {
            violations.push("global degree must be at least 1".to_string());
        }
        if self.label_map.is_empty() {
            violations.push("portrait has no labels".to_string());
        }
        let mut fibers: BTreeMap<&str, u64> = BTreeMap::new();
        let mut ramification: i64 = 0;
        for (y, x) in &self.label_map {
            match self.local_degrees.get(y) {
                None => violations.push(format!("label {y:?} has no local degree")),
                Some(0) => violations.push(format!("label {y:?} has local degree 0")),
                Some(&deg) => {
                    *fibers.entry(x.as_str()).or_insert(0) += u64::from(deg);
                    ramification += i64::from(deg) - 1;
                }
            }
        }
        for (x, total) in &fibers {
            if *total != self.degree as u64 {
                violations.push(format!(
                    "fiber over {x:?} has total degree {total}, expected {}",
                    self.degree
                ));
            }
        }
        let bound = 2 * self.degree as i64 - 2;
        if ramification > bound {
            violations.push(format!(
                "total ramification {ramification} exceeds {bound}"
            ));
        }
        ValidationReport { violations }
    }

    /// The downstairs labels, in deterministic order.
    pub fn target_labels(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for x in self.label_map.values() {
            if !out.contains(x) {
                out.push(x.clone());
            }
        }
        out.sort();
        out
    }
}

/// A cover between limiting trees: the map on vertices plus the residue
/// sphere map at each source vertex (in the canonical charts of the vertex
/// and its image).
#[derive(Debug, Clone)]
pub struct TreeCover {
    pub source: TreeOfSpheres,
    pub target: TreeOfSpheres,
    pub portrait: Portrait,
    pub vertex_map: Vec<usize>,
    pub sphere_maps: Vec<RatFn>,
}

/// Build the limiting trees of both families and the induced cover.
///
/// The upstairs family must list exactly the portrait's labels and the
/// downstairs family exactly the portrait's target labels; every upstairs
/// point must map onto its downstairs point (exactly, or at least to the
/// working precision when inputs are truncated).
pub fn limit_cover(
    map: &RationalMapL,
    portrait: &Portrait,
    source_family: &MarkedFamily,
    target_family: &MarkedFamily,
    budget: &Rat,
) -> Result<TreeCover> {
    let report = portrait.validate();
    if !report.is_valid() {
        return Err(Error::PortraitInvalid(report.violations.join("; ")));
    }
    if map.degree() != portrait.degree {
        return Err(Error::PortraitInvalid(format!(
            "map has degree {} but the portrait says {}",
            map.degree(),
            portrait.degree
        )));
    }
    let mut upstairs: Vec<&String> = portrait.label_map.keys().collect();
    upstairs.sort();
    let mut given: Vec<&String> = source_family.labels.iter().collect();
    given.sort();
    if upstairs != given {
        return Err(Error::PortraitInvalid(
            "upstairs family labels do not match the portrait".into(),
        ));
    }
    let mut downstairs = portrait.target_labels();
    downstairs.sort();
    let mut given: Vec<String> = target_family.labels.clone();
    given.sort();
    if downstairs != given {
        return Err(Error::PortraitInvalid(
            "downstairs family labels do not match the portrait".into(),
        ));
    }
    // Every upstairs point must actually map to its downstairs point.
    for (i, y) in source_family.labels.iter().enumerate() {
        let x_label = &portrait.label_map[y];
        let expected = target_family.get(x_label).expect("checked above");
        let actual = map.apply_typei(&source_family.points[i])?;
        let consistent = match (&actual, expected) {
            (PointP1L::Infinity, PointP1L::Infinity) => true,
            (PointP1L::Infinity, _) | (_, PointP1L::Infinity) => false,
            (PointP1L::Finite(a), PointP1L::Finite(b)) => {
                // Truncated inputs can only agree modulo their precision.
                !matches!(a.sub(b).val(), Valuation::Finite(_))
            }
        };
        if !consistent {
            return Err(Error::FamilyIncompatible(format!(
                "the map sends {y:?} to {actual}, not to {x_label:?}"
            )));
        }
    }
    let source = TreeOfSpheres::limit_tree(source_family)?;
    let target = TreeOfSpheres::limit_tree(target_family)?;
    limit_cover_with_trees(map, portrait, source, target, budget)
}

/// Induce the cover on already-built trees.
pub fn limit_cover_with_trees(
    map: &RationalMapL,
    portrait: &Portrait,
    source: TreeOfSpheres,
    target: TreeOfSpheres,
    budget: &Rat,
) -> Result<TreeCover> {
    let mut vertex_map = Vec::with_capacity(source.vertices.len());
    let mut sphere_maps = Vec::with_capacity(source.vertices.len());
    for v in &source.vertices {
        let image = map.image_typeii(&v.point, budget)?;
        let w = target.vertex_index(&image).ok_or_else(|| {
            Error::VertexImageMissing(format!(
                "image {image} of vertex {} is not a vertex of the target tree",
                v.point
            ))
        })?;
        sphere_maps.push(map.tangent_map(&v.point, &image)?);
        vertex_map.push(w);
    }
    Ok(TreeCover {
        source,
        target,
        portrait: portrait.clone(),
        vertex_map,
        sphere_maps,
    })
}

/// Exact verification of the covering conditions. Violations are collected
/// as human-readable strings; an empty report means the cover checks out.
pub fn verify_cover(cover: &TreeCover) -> Result<ValidationReport> {
    let mut violations = Vec::new();
    let d = cover.portrait.degree;
    let source = &cover.source;
    let target = &cover.target;
    // Map each source label index to its target label index.
    let label_image: Vec<usize> = source
        .labels
        .iter()
        .map(|y| {
            let x = cover.portrait.label_map.get(y).ok_or_else(|| {
                Error::PortraitInvalid(format!("label {y:?} is missing from the portrait"))
            })?;
            target.labels.iter().position(|l| l == x).ok_or_else(|| {
                Error::PortraitInvalid(format!(
                    "downstairs label {x:?} is missing from the target tree"
                ))
            })
        })
        .collect::<Result<_>>()?;

    // Marked directions commute with the sphere maps.
    for (vi, v) in source.vertices.iter().enumerate() {
        let w = &target.vertices[cover.vertex_map[vi]];
        let f = &cover.sphere_maps[vi];
        for (li, dir) in v.marking.iter().enumerate() {
            let image_dir = f.apply_cp1(dir);
            let expected = &w.marking[label_image[li]];
            if &image_dir != expected {
                violations.push(format!(
                    "diagram: at vertex {} the marked point {:?} maps to \
                     direction {image_dir}, expected {expected}",
                    v.point, source.labels[li]
                ));
            }
        }
    }

    // Edges map to edges, direction diagrams commute, and the local degree
    // along an edge agrees from both ends.
    for &(a, b) in &source.edges {
        let (wa, wb) = (cover.vertex_map[a], cover.vertex_map[b]);
        if wa == wb {
            violations.push(format!(
                "edge: the edge between {} and {} collapses to a single \
                 target vertex",
                source.vertices[a].point, source.vertices[b].point
            ));
            continue;
        }
        let is_target_edge = target
            .edges
            .iter()
            .any(|&(x, y)| (x, y) == (wa.min(wb), wa.max(wb)));
        if !is_target_edge {
            violations.push(format!(
                "edge: the images of {} and {} are not adjacent downstairs",
                source.vertices[a].point, source.vertices[b].point
            ));
            continue;
        }
        let mut degrees = [0u32; 2];
        for (slot, (from, to)) in [(a, b), (b, a)].into_iter().enumerate() {
            let dir = source.edge_direction(from, to)?;
            let f = &cover.sphere_maps[from];
            let image_dir = f.apply_cp1(&dir);
            let expected =
                target.edge_direction(cover.vertex_map[from], cover.vertex_map[to])?;
            if image_dir != expected {
                violations.push(format!(
                    "edge: at vertex {} the edge direction {dir} maps to \
                     {image_dir}, expected {expected}",
                    source.vertices[from].point
                ));
            }
            degrees[slot] = local_mult_at(f, &dir);
        }
        if degrees[0] != degrees[1] {
            violations.push(format!(
                "edge: local degrees {} and {} disagree along the edge \
                 between {} and {}",
                degrees[0], degrees[1], source.vertices[a].point, source.vertices[b].point
            ));
        }
    }

    // Portrait degrees at directly attached leaves.
    for (li, y) in source.labels.iter().enumerate() {
        let Some(&claimed) = cover.portrait.local_degrees.get(y) else {
            violations.push(format!("leaf-degree: {y:?} has no portrait degree"));
            continue;
        };
        for (vi, v) in source.vertices.iter().enumerate() {
            if !source.attaches_directly(vi, li)? {
                continue;
            }
            let mult = local_mult_at(&cover.sphere_maps[vi], &v.marking[li]);
            if mult != claimed {
                violations.push(format!(
                    "leaf-degree: {y:?} attaches at {} with local degree \
                     {mult}, portrait says {claimed}",
                    v.point
                ));
            }
        }
    }

    // Surjectivity and fiber degree sums.
    for (wi, w) in target.vertices.iter().enumerate() {
        let fiber: Vec<usize> = (0..source.vertices.len())
            .filter(|&vi| cover.vertex_map[vi] == wi)
            .collect();
        if fiber.is_empty() {
            violations.push(format!(
                "surjectivity: target vertex {} has no preimage",
                w.point
            ));
            continue;
        }
        let total: usize = fiber
            .iter()
            .map(|&vi| cover.sphere_maps[vi].map_degree())
            .sum();
        if total != d {
            violations.push(format!(
                "fiber-degree: local degrees over {} sum to {total}, \
                 expected {d}",
                w.point
            ));
        }
    }

    // Per-sphere ramification: every critical point of a sphere map sits
    // in a marked or edge direction.
    for (vi, v) in source.vertices.iter().enumerate() {
        let f = &cover.sphere_maps[vi];
        let delta = f.map_degree();
        let total: i64 = source
            .directions_at(vi)?
            .iter()
            .map(|dir| i64::from(local_mult_at(f, dir)) - 1)
            .sum();
        if total != 2 * delta as i64 - 2 {
            violations.push(format!(
                "ramification: directions at {} account for {total} of the \
                 {} required by Riemann-Hurwitz",
                v.point,
                2 * delta as i64 - 2
            ));
        }
    }

    // Critical values are marked downstairs.
    for (vi, v) in source.vertices.iter().enumerate() {
        let f = &cover.sphere_maps[vi];
        let delta = f.map_degree();
        let wi = cover.vertex_map[vi];
        let defect: i64 = target
            .directions_at(wi)?
            .iter()
            .map(|dir| delta as i64 - distinct_preimages(f, dir) as i64)
            .sum();
        if defect != 2 * delta as i64 - 2 {
            violations.push(format!(
                "critical-values: the sphere map at {} has critical values \
                 outside the marked directions downstairs",
                v.point
            ));
        }
    }

    Ok(ValidationReport { violations })
}

/// Check that the target tree embeds in the source tree: every downstairs
/// marked point appears upstairs (matched by value, under any label) and
/// every downstairs vertex is also an upstairs vertex. Returns, for each
/// target vertex, the index of the matching source vertex.
pub fn check_compatible(source: &TreeOfSpheres, target: &TreeOfSpheres) -> Result<Vec<usize>> {
    for (i, p) in target.points.iter().enumerate() {
        let mut found = false;
        for q in &source.points {
            if same_point(p, q)? {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::NotCompatible(format!(
                "marked point {:?} of the target tree has no counterpart \
                 in the source tree",
                target.labels[i]
            )));
        }
    }
    let mut mapping = Vec::with_capacity(target.vertices.len());
    for w in &target.vertices {
        match source.vertex_index(&w.point) {
            Some(i) => mapping.push(i),
            None => {
                return Err(Error::NotCompatible(format!(
                    "vertex {} of the target tree is not a vertex of the \
                     source tree",
                    w.point
                )));
            }
        }
    }
    Ok(mapping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int, ExactComplex};
    use crate::puiseux::{series_int, t_rat, Cutoff, PuiseuxSeries, Series, Term};
    use crate::ratmap::LPoly;

    fn fam(pairs: Vec<(&str, PointP1L)>) -> MarkedFamily {
        let (labels, points): (Vec<String>, Vec<PointP1L>) = pairs
            .into_iter()
            .map(|(l, p)| (l.to_string(), p))
            .unzip();
        MarkedFamily::new(labels, points).unwrap()
    }

    fn pt(s: PuiseuxSeries) -> PointP1L {
        PointP1L::Finite(s)
    }

    fn ball(center: PuiseuxSeries, p: i64, q: i64) -> TypeIIPoint {
        TypeIIPoint::new(&center, rat(p, q)).unwrap()
    }

    fn budget() -> Rat {
        rat_int(48)
    }

    fn c(n: i64) -> CP1 {
        CP1::from_int(n)
    }

    #[test]
    fn constant_family_collapses_to_the_gauss_point() {
        let tree = TreeOfSpheres::limit_tree(&fam(vec![
            ("a", pt(series_int(0))),
            ("b", pt(series_int(1))),
            ("c", pt(series_int(2))),
            ("d", pt(series_int(3))),
        ]))
        .unwrap();
        assert_eq!(tree.vertices.len(), 1);
        assert_eq!(tree.vertices[0].point, TypeIIPoint::gauss());
        assert_eq!(tree.vertices[0].marking, vec![c(0), c(1), c(2), c(3)]);
        assert!(tree.edges.is_empty());
    }

    #[test]
    fn two_scales_give_a_two_vertex_chain() {
        // (0, 1, 1/t, 2/t): the Gauss point sees (0, 1, ∞, ∞); the outer
        // vertex at scale -1 sees (0, 0, 1, 2).
        let inv_t = PuiseuxSeries::t_pow(rat(-1, 1));
        let tree = TreeOfSpheres::limit_tree(&fam(vec![
            ("a", pt(series_int(0))),
            ("b", pt(series_int(1))),
            ("c", pt(inv_t.clone())),
            ("d", pt(inv_t.scale(&ExactComplex::from_int(2)))),
        ]))
        .unwrap();
        assert_eq!(tree.vertices.len(), 2);
        // Deterministic order: radius parameter ascending.
        assert_eq!(tree.vertices[0].point, ball(PuiseuxSeries::zero(), -1, 1));
        assert_eq!(tree.vertices[1].point, TypeIIPoint::gauss());
        assert_eq!(tree.vertices[0].marking, vec![c(0), c(0), c(1), c(2)]);
        assert_eq!(
            tree.vertices[1].marking,
            vec![c(0), c(1), CP1::Infinity, CP1::Infinity]
        );
        assert_eq!(tree.edges, vec![(0, 1)]);
        // Edge directions: the Gauss point lies inside direction 0 of the
        // outer vertex; the outer vertex lies beyond ∞ from the Gauss point.
        assert_eq!(tree.edge_direction(0, 1).unwrap(), c(0));
        assert_eq!(tree.edge_direction(1, 0).unwrap(), CP1::Infinity);
    }

    #[test]
    fn incomparable_vertices_can_be_adjacent() {
        // (0, 1, 1/t, 1/t + 1): vertices at the Gauss point and at
        // <t^-1; 0>, which are incomparable balls joined through <0; -1>,
        // which is not a vertex.
        let inv_t = PuiseuxSeries::t_pow(rat(-1, 1));
        let tree = TreeOfSpheres::limit_tree(&fam(vec![
            ("a", pt(series_int(0))),
            ("b", pt(series_int(1))),
            ("c", pt(inv_t.clone())),
            ("d", pt(inv_t.add(&series_int(1)))),
        ]))
        .unwrap();
        assert_eq!(tree.vertices.len(), 2);
        let gauss_idx = tree.vertex_index(&TypeIIPoint::gauss()).unwrap();
        let shifted = TypeIIPoint::new(&inv_t, rat(0, 1)).unwrap();
        let other_idx = tree.vertex_index(&shifted).unwrap();
        assert_eq!(
            tree.vertices[gauss_idx].point.compare(&tree.vertices[other_idx].point),
            BallOrder::Incomparable
        );
        assert_eq!(tree.edges.len(), 1);
        // Both vertices see the other beyond ∞.
        assert_eq!(tree.edge_direction(gauss_idx, other_idx).unwrap(), CP1::Infinity);
        assert_eq!(tree.edge_direction(other_idx, gauss_idx).unwrap(), CP1::Infinity);
        assert_eq!(
            tree.vertices[other_idx].marking,
            vec![CP1::Infinity, CP1::Infinity, c(0), c(1)]
        );
    }

    #[test]
    fn side_by_side_balls() {
        // (0, t, 1, 1+t): two incomparable vertices <0;1> and <1;1>; their
        // join (the Gauss point) has only two directions and is no vertex.
        let tree = TreeOfSpheres::limit_tree(&fam(vec![
            ("a", pt(series_int(0))),
            ("b", pt(t_rat(1, 1))),
            ("c", pt(series_int(1))),
            ("d", pt(series_int(1).add(&t_rat(1, 1)))),
        ]))
        .unwrap();
        assert_eq!(tree.vertices.len(), 2);
        assert!(tree.vertex_index(&ball(PuiseuxSeries::zero(), 1, 1)).is_some());
        assert!(tree.vertex_index(&ball(series_int(1), 1, 1)).is_some());
        assert_eq!(tree.edges.len(), 1);
    }

    #[test]
    fn direct_attachment_respects_intermediate_vertices() {
        let inv_t = PuiseuxSeries::t_pow(rat(-1, 1));
        let tree = TreeOfSpheres::limit_tree(&fam(vec![
            ("a", pt(series_int(0))),
            ("b", pt(series_int(1))),
            ("c", pt(inv_t.clone())),
            ("d", pt(inv_t.scale(&ExactComplex::from_int(2)))),
        ]))
        .unwrap();
        let outer = 0;
        let gauss = 1;
        // 1/t and 2/t attach at the outer vertex, 0 and 1 at the Gauss
        // point; 0 does not attach directly at the outer vertex because
        // the Gauss point lies between.
        assert!(tree.attaches_directly(outer, 2).unwrap());
        assert!(tree.attaches_directly(outer, 3).unwrap());
        assert!(!tree.attaches_directly(outer, 0).unwrap());
        assert!(!tree.attaches_directly(outer, 1).unwrap());
        assert!(tree.attaches_directly(gauss, 0).unwrap());
        assert!(tree.attaches_directly(gauss, 1).unwrap());
        assert!(!tree.attaches_directly(gauss, 2).unwrap());
    }

    #[test]
    fn duplicate_points_are_rejected() {
        let e = TreeOfSpheres::limit_tree(&fam(vec![
            ("a", pt(series_int(0))),
            ("b", pt(series_int(0))),
            ("c", pt(series_int(1))),
        ]))
        .unwrap_err();
        assert_eq!(e.code(), "NOT_DISTINCT");
    }

    fn sqrt_t() -> PuiseuxSeries {
        PuiseuxSeries::t_pow(rat(1, 2))
    }

    /// `z^2/t` with the fiber data over `{0, ∞, 1}`.
    fn z2t_cover_input() -> (RationalMapL, Portrait, MarkedFamily, MarkedFamily) {
        let map = RationalMapL::new(
            LPoly::from_coeffs(vec![
                PuiseuxSeries::zero(),
                PuiseuxSeries::zero(),
                PuiseuxSeries::one(),
            ]),
            LPoly::from_coeffs(vec![t_rat(1, 1)]),
        )
        .unwrap();
        let portrait = Portrait {
            degree: 2,
            label_map: [("y0", "x0"), ("yinf", "xinf"), ("y1", "x1"), ("y2", "x1")]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            local_degrees: [("y0", 2), ("yinf", 2), ("y1", 1), ("y2", 1)]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b))
                .collect(),
        };
        let upstairs = fam(vec![
            ("y0", pt(series_int(0))),
            ("yinf", PointP1L::Infinity),
            ("y1", pt(sqrt_t())),
            ("y2", pt(sqrt_t().neg())),
        ]);
        let downstairs = fam(vec![
            ("x0", pt(series_int(0))),
            ("xinf", PointP1L::Infinity),
            ("x1", pt(series_int(1))),
        ]);
        (map, portrait, upstairs, downstairs)
    }

    #[test]
    fn cover_for_squaring_over_t() {
        let (map, portrait, upstairs, downstairs) = z2t_cover_input();
        let cover = limit_cover(&map, &portrait, &upstairs, &downstairs, &budget()).unwrap();
        assert_eq!(cover.source.vertices.len(), 1);
        assert_eq!(
            cover.source.vertices[0].point,
            ball(PuiseuxSeries::zero(), 1, 2)
        );
        assert_eq!(cover.target.vertices.len(), 1);
        assert_eq!(cover.target.vertices[0].point, TypeIIPoint::gauss());
        assert_eq!(cover.vertex_map, vec![0]);
        assert_eq!(cover.sphere_maps[0].map_degree(), 2);
        let report = verify_cover(&cover).unwrap();
        assert!(report.is_valid(), "violations: {:?}", report.violations);
    }

    #[test]
    fn cover_rejects_inconsistent_fibers() {
        let (map, portrait, mut upstairs, downstairs) = z2t_cover_input();
        // Perturb one preimage so it no longer maps to its fiber point.
        upstairs.points[2] = pt(sqrt_t().add(&series_int(1)));
        let e = limit_cover(&map, &portrait, &upstairs, &downstairs, &budget()).unwrap_err();
        assert_eq!(e.code(), "FAMILY_INCOMPATIBLE");
    }

    #[test]
    fn cover_rejects_bad_portraits() {
        let (map, mut portrait, upstairs, downstairs) = z2t_cover_input();
        portrait.local_degrees.insert("y0".to_string(), 1);
        let e = limit_cover(&map, &portrait, &upstairs, &downstairs, &budget()).unwrap_err();
        assert_eq!(e.code(), "PORTRAIT_INVALID");
    }

    #[test]
    fn pruned_target_is_reported_as_missing_image() {
        let (map, portrait, upstairs, _) = z2t_cover_input();
        let source = TreeOfSpheres::limit_tree(&upstairs).unwrap();
        // A target tree around the wrong marked set: its single vertex is
        // not the image of the source vertex.
        let wrong_target = TreeOfSpheres::limit_tree(&fam(vec![
            ("x0", pt(t_rat(2, 1))),
            ("x1", pt(t_rat(2, 1).add(&t_rat(3, 1)))),
            ("x2", pt(series_int(5))),
        ]))
        .unwrap();
        let e = limit_cover_with_trees(&map, &portrait, source, wrong_target, &budget())
            .unwrap_err();
        assert_eq!(e.code(), "VERTEX_IMAGE_MISSING");
    }

    #[test]
    fn verify_catches_a_corrupted_sphere_map() {
        let (map, portrait, upstairs, downstairs) = z2t_cover_input();
        let mut cover = limit_cover(&map, &portrait, &upstairs, &downstairs, &budget()).unwrap();
        // Replace the sphere map with the cube: degrees and diagrams break.
        cover.sphere_maps[0] =
            RatFn::from_poly(crate::cpoly::CPoly::monomial(3, ExactComplex::one()));
        let report = verify_cover(&cover).unwrap();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| v.starts_with("fiber-degree")));
        assert!(report.violations.iter().any(|v| v.starts_with("diagram")));
    }

    /// `z^2` on `X = {0, ∞, 1, t}`: both trees have two vertices and one
    /// edge, exercising the edge conditions.
    fn squaring_two_vertex_cover() -> TreeCover {
        let map = RationalMapL::new(
            LPoly::from_coeffs(vec![
                PuiseuxSeries::zero(),
                PuiseuxSeries::zero(),
                PuiseuxSeries::one(),
            ]),
            LPoly::from_coeffs(vec![PuiseuxSeries::one()]),
        )
        .unwrap();
        let portrait = Portrait {
            degree: 2,
            label_map: [
                ("y0", "x0"),
                ("yinf", "xinf"),
                ("y1", "x1"),
                ("ym1", "x1"),
                ("yr", "xt"),
                ("ymr", "xt"),
            ]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
            local_degrees: [
                ("y0", 2),
                ("yinf", 2),
                ("y1", 1),
                ("ym1", 1),
                ("yr", 1),
                ("ymr", 1),
            ]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b))
            .collect(),
        };
        let upstairs = fam(vec![
            ("y0", pt(series_int(0))),
            ("yinf", PointP1L::Infinity),
            ("y1", pt(series_int(1))),
            ("ym1", pt(series_int(-1))),
            ("yr", pt(sqrt_t())),
            ("ymr", pt(sqrt_t().neg())),
        ]);
        let downstairs = fam(vec![
            ("x0", pt(series_int(0))),
            ("xinf", PointP1L::Infinity),
            ("x1", pt(series_int(1))),
            ("xt", pt(t_rat(1, 1))),
        ]);
        limit_cover(&map, &portrait, &upstairs, &downstairs, &budget()).unwrap()
    }

    #[test]
    fn two_vertex_cover_passes_all_checks() {
        let cover = squaring_two_vertex_cover();
        assert_eq!(cover.source.vertices.len(), 2);
        assert_eq!(cover.target.vertices.len(), 2);
        assert_eq!(cover.source.edges.len(), 1);
        // The half-scale vertex maps to <0;1>, the Gauss point to itself.
        let half = cover
            .source
            .vertex_index(&ball(PuiseuxSeries::zero(), 1, 2))
            .unwrap();
        let gauss_up = cover.source.vertex_index(&TypeIIPoint::gauss()).unwrap();
        let one = cover
            .target
            .vertex_index(&ball(PuiseuxSeries::zero(), 1, 1))
            .unwrap();
        let gauss_down = cover.target.vertex_index(&TypeIIPoint::gauss()).unwrap();
        assert_eq!(cover.vertex_map[half], one);
        assert_eq!(cover.vertex_map[gauss_up], gauss_down);
        let report = verify_cover(&cover).unwrap();
        assert!(report.is_valid(), "violations: {:?}", report.violations);
    }

    #[test]
    fn truncated_fiber_points_are_accepted() {
        // t z^2 - z + 1 with the fiber over 0 given by truncated series
        // roots; the whole pipeline runs on certified digits.
        let map = RationalMapL::new(
            LPoly::from_coeffs(vec![series_int(1), series_int(-1), t_rat(1, 1)]),
            LPoly::from_coeffs(vec![PuiseuxSeries::one()]),
        )
        .unwrap();
        let half_inv_t = PuiseuxSeries::t_pow(rat(-1, 1))
            .scale(&ExactComplex::new(rat(1, 2), rat(0, 1)));
        let crit_value = series_int(1).sub(
            &PuiseuxSeries::t_pow(rat(-1, 1)).scale(&ExactComplex::new(rat(1, 4), rat(0, 1))),
        );
        // Roots of t z^2 - z + 1: 1/t - 1 - t - ... and 1 + t + 2t^2 + ...
        let root_big = Series::from_terms(
            vec![
                Term { exp: rat(-1, 1), coef: ExactComplex::one() },
                Term { exp: rat(0, 1), coef: ExactComplex::from_int(-1) },
                Term { exp: rat(1, 1), coef: ExactComplex::from_int(-1) },
            ],
            Cutoff::Finite(rat(2, 1)),
        );
        let root_small = Series::from_terms(
            vec![
                Term { exp: rat(0, 1), coef: ExactComplex::one() },
                Term { exp: rat(1, 1), coef: ExactComplex::one() },
                Term { exp: rat(2, 1), coef: ExactComplex::from_int(2) },
            ],
            Cutoff::Finite(rat(3, 1)),
        );
        let portrait = Portrait {
            degree: 2,
            label_map: [("yinf", "xinf"), ("yc", "xc"), ("ya", "x0"), ("yb", "x0")]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            local_degrees: [("yinf", 2), ("yc", 2), ("ya", 1), ("yb", 1)]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b))
                .collect(),
        };
        let upstairs = fam(vec![
            ("yinf", PointP1L::Infinity),
            ("yc", pt(half_inv_t)),
            ("ya", pt(root_big)),
            ("yb", pt(root_small)),
        ]);
        let downstairs = fam(vec![
            ("xinf", PointP1L::Infinity),
            ("xc", pt(crit_value)),
            ("x0", pt(series_int(0))),
        ]);
        let cover = limit_cover(&map, &portrait, &upstairs, &downstairs, &budget()).unwrap();
        assert_eq!(cover.source.vertices.len(), 1);
        assert_eq!(
            cover.source.vertices[0].point,
            ball(PuiseuxSeries::zero(), -1, 1)
        );
        assert_eq!(cover.target.vertices[0].point, ball(PuiseuxSeries::zero(), -1, 1));
        // Sphere map u^2 - u; the critical direction 1/2 maps to -1/4.
        assert_eq!(
            cover.sphere_maps[0],
            RatFn::from_poly(crate::cpoly::CPoly::from_coeffs(vec![
                ExactComplex::zero(),
                ExactComplex::from_int(-1),
                ExactComplex::one(),
            ]))
        );
        let report = verify_cover(&cover).unwrap();
        assert!(report.is_valid(), "violations: {:?}", report.violations);
    }

    #[test]
    fn compatibility_of_nested_trees() {
        // Upstairs family refines the downstairs one.
        let inv_t = PuiseuxSeries::t_pow(rat(-1, 1));
        let big = fam(vec![
            ("a", pt(series_int(0))),
            ("b", pt(series_int(1))),
            ("c", pt(inv_t.clone())),
            ("d", pt(inv_t.scale(&ExactComplex::from_int(2)))),
        ]);
        let small = fam(vec![
            ("p", pt(series_int(0))),
            ("q", pt(series_int(1))),
            ("r", pt(inv_t.clone())),
            ("s", pt(inv_t.scale(&ExactComplex::from_int(2)))),
        ]);
        let source = TreeOfSpheres::limit_tree(&big).unwrap();
        let target = TreeOfSpheres::limit_tree(&small).unwrap();
        let mapping = check_compatible(&source, &target).unwrap();
        assert_eq!(mapping, vec![0, 1]);
    }

    #[test]
    fn incompatibility_is_detected() {
        // The marked point 1 of the target tree does not appear upstairs
        // under any label.
        let source = TreeOfSpheres::limit_tree(&fam(vec![
            ("y0", pt(series_int(0))),
            ("yinf", PointP1L::Infinity),
            ("y1", pt(sqrt_t())),
            ("y2", pt(sqrt_t().neg())),
        ]))
        .unwrap();
        let target = TreeOfSpheres::limit_tree(&fam(vec![
            ("x0", pt(series_int(0))),
            ("xinf", PointP1L::Infinity),
            ("x1", pt(sqrt_t())),
            ("xw", pt(series_int(1))),
        ]))
        .unwrap();
        let e = check_compatible(&source, &target).unwrap_err();
        assert_eq!(e.code(), "NOT_COMPATIBLE");
    }

    #[test]
    fn vertex_mismatch_is_detected() {
        // Same marked values on both sides, but a hand-altered target
        // vertex that the source tree does not contain.
        let family = fam(vec![
            ("a", pt(series_int(0))),
            ("b", pt(series_int(1))),
            ("c", pt(series_int(2))),
        ]);
        let source = TreeOfSpheres::limit_tree(&family).unwrap();
        let mut target = TreeOfSpheres::limit_tree(&family).unwrap();
        target.vertices[0].point = ball(PuiseuxSeries::zero(), 7, 1);
        let e = check_compatible(&source, &target).unwrap_err();
        assert_eq!(e.code(), "NOT_COMPATIBLE");
    }

    #[test]
    fn portrait_validation_reports_each_failure() {
        let portrait = Portrait {
            degree: 2,
            label_map: [("a", "x"), ("b", "x"), ("c", "y")]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            local_degrees: [("a", 2), ("b", 1), ("c", 3)]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b))
                .collect(),
        };
        let report = portrait.validate();
        assert!(!report.is_valid());
        // Fiber over x sums to 3, fiber over y to 3, and ramification
        // 1 + 0 + 2 exceeds 2d - 2 = 2.
        assert_eq!(report.violations.len(), 3);
    }
}
