//! The precise construction built from double corners, and its imprecise
//! variant.
//!
//! A double corner is a 90° turn of `P` cut by a 2×2 step, with one point on
//! each of the two lines meeting at the turn. A matching curve runs on one of
//! two tracks: the line of `P` itself or its offset by eps toward the inside
//! of the turn. Each corner swaps the track, and a point lying on the inside
//! track in the middle of a stretch lets the curve change tracks.
//!
//! Each variable is a dip made of two counter-clockwise corners. The clause
//! section is a single counter-clockwise spiral whose vertical passes cross
//! the variable row next to literal points.

use super::{validate_3b2, CnfFormula, GadgetInstance, Literal, Role};
use crate::cpsm::PointSet;
use crate::error::{Error, Result};
use crate::frechet::Curve;
use crate::geom::{in_cylinder, point_segment_distance, Point, Segment};
use crate::imprecise::ImpreciseRegion;

const VAR_PITCH: f64 = 24.0;
const VAR_WIDTH: f64 = 16.0;
/// Shortest horizontal stretch between two passes.
const MIN_RUN: f64 = 6.0;
const FIRST_LEVEL: f64 = 9.0;
const LEVEL_STEP: f64 = 4.0;

const LEFT: Point = Point { x: -1.0, y: 0.0 };
const RIGHT: Point = Point { x: 1.0, y: 0.0 };
const UP: Point = Point { x: 0.0, y: 1.0 };
const DOWN: Point = Point { x: 0.0, y: -1.0 };

fn var_x(var: usize) -> f64 {
    VAR_PITCH * var as f64
}

/// The literal point probed by a down pass or an up pass, and the column of
/// that pass. Each literal has one point of each kind.
fn probe(lit: Literal, down: bool) -> (Point, f64) {
    let x = var_x(lit.var);
    match (lit.positive, down) {
        (true, true) => (Point::new(x + 15.0, 0.0), x + 14.0),
        (false, true) => (Point::new(x, 1.0), x - 1.0),
        (true, false) => (Point::new(x + 1.0, 0.0), x + 2.0),
        (false, false) => (Point::new(x + 16.0, 1.0), x + 17.0),
    }
}

struct Pass {
    col: f64,
    probe: Option<Literal>,
    /// First pass of a clause loop.
    opens_clause: bool,
}

struct Route {
    passes: Vec<Pass>,
    x_end: f64,
}

/// Lays out one pass per clause occurrence. Passes alternate down and up, and
/// each horizontal stretch must run the way the spiral turns; where the next
/// probe does not fit, dummy passes at the outer columns are inserted. Each
/// literal uses its down point once and its up point once.
fn route(f: &CnfFormula) -> Route {
    let x_last = var_x(f.num_vars - 1);
    let (mut left, mut right) = (0usize, 0usize);
    let mut passes: Vec<Pass> = Vec::new();
    // Per literal: the kind (down) of its first occurrence, if placed.
    let mut first_kind: Vec<Option<bool>> = vec![None; 2 * f.num_vars];
    let lit_id = |l: Literal| 2 * l.var + l.positive as usize;

    for clause in &f.clauses {
        let mut best: Option<(usize, Vec<(Literal, bool)>)> = None;
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            for choice in 0..8u32 {
                let mut kinds = first_kind.clone();
                let mut plan = Vec::with_capacity(3);
                for (slot, &li) in perm.iter().enumerate() {
                    let lit = clause[li];
                    let down = match kinds[lit_id(lit)] {
                        Some(k) => !k,
                        None => choice >> slot & 1 == 1,
                    };
                    kinds[lit_id(lit)] = Some(down);
                    plan.push((lit, down));
                }
                // Simulate with placeholder dummies.
                let mut sim: Vec<Pass> = Vec::new();
                let mut total = 0;
                for &(lit, down) in &plan {
                    let col = probe(lit, down).1;
                    let mut view: Vec<&Pass> = passes.iter().chain(sim.iter()).collect();
                    let c = cost_view(&view, down, col);
                    for _ in 0..c {
                        let d = view.len() % 2 == 0;
                        sim.push(Pass { col: if d { f64::NEG_INFINITY } else { f64::INFINITY }, probe: None, opens_clause: false });
                        view = passes.iter().chain(sim.iter()).collect();
                    }
                    total += c;
                    sim.push(Pass { col, probe: Some(lit), opens_clause: false });
                }
                if best.as_ref().is_none_or(|(b, _)| total < *b) {
                    best = Some((total, plan));
                }
            }
        }
        let (_, plan) = best.expect("some ordering always exists");
        let mut opens = true;
        for (lit, down) in plan {
            let col = probe(lit, down).1;
            let id = lit_id(lit);
            if first_kind[id].is_none() {
                first_kind[id] = Some(down);
            }
            let view: Vec<&Pass> = passes.iter().collect();
            for _ in 0..cost_view(&view, down, col) {
                let d = passes.len() % 2 == 0;
                let col = if d {
                    left += 1;
                    -3.0 - MIN_RUN * left as f64
                } else {
                    right += 1;
                    x_last + 19.0 + MIN_RUN * right as f64
                };
                passes.push(Pass { col, probe: None, opens_clause: std::mem::take(&mut opens) });
            }
            passes.push(Pass { col, probe: Some(lit), opens_clause: std::mem::take(&mut opens) });
        }
    }
    // A closing pass outside every literal column.
    let col = if passes.len() % 2 == 0 {
        left += 1;
        -3.0 - MIN_RUN * left as f64
    } else {
        right += 1;
        x_last + 19.0 + MIN_RUN * right as f64
    };
    passes.push(Pass { col, probe: None, opens_clause: true });
    let x_end = x_last + 19.0 + MIN_RUN * (right + 1) as f64 + 1.0;
    Route { passes, x_end }
}

fn cost_view(passes: &[&Pass], down: bool, col: f64) -> usize {
    let next_down = passes.len() % 2 == 0;
    let prev = passes.last().map(|p| p.col);
    if down != next_down {
        1
    } else if prev.is_none_or(|c| if down { col <= c - MIN_RUN } else { col >= c + MIN_RUN }) {
        0
    } else {
        2
    }
}

/// Which points of a double corner are present.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Keep {
    Both,
    /// Only the point on the incoming line.
    Inner,
    /// Only the point on the incoming inside track.
    Outer,
}

struct Draw {
    verts: Vec<Point>,
    points: Vec<Point>,
    roles: Vec<Role>,
    allowed: Vec<Vec<usize>>,
    corners: usize,
    var_corners: usize,
    /// Track the curve arrives on at the next spiral corner when it has not
    /// switched; 0 is the line of `P`.
    expect: u8,
}

impl Draw {
    fn vertex(&mut self, p: Point) {
        self.verts.push(p);
    }

    fn point(&mut self, p: Point, role: Role, allowed: Vec<usize>) -> usize {
        self.points.push(p);
        self.roles.push(role);
        self.allowed.push(allowed);
        self.points.len() - 1
    }

    /// Emits the step for a turn at `c` from direction `u` to `v`. Returns the
    /// two corner points (on the incoming line, on the outgoing line) and the
    /// index of the first step vertex.
    fn corner(&mut self, c: Point, u: Point, v: Point) -> (Point, Point, usize) {
        let i0 = self.verts.len();
        self.vertex(c - u * 2.0);
        self.vertex(c - u * 2.0 + v * 2.0);
        self.vertex(c + v * 2.0);
        self.corners += 1;
        (c - u, c + v, i0)
    }

    /// A corner of the clause spiral. The first corner keeps only its inner
    /// point, which fixes the track; a dead end keeps only the point for the
    /// track a clause loop reaches after switching. Returns the first step
    /// vertex and the outgoing track.
    fn spiral_corner(&mut self, c: Point, u: Point, v: Point, arms: &[usize], dead: bool) -> (usize, u8) {
        let (a, b, i0) = self.corner(c, u, v);
        let first = self.corners == self.var_corners + 1;
        let dead = dead && !first;
        let keep = match (first, dead, self.expect) {
            (true, _, _) => Keep::Inner,
            (false, true, 0) => Keep::Outer,
            (false, true, _) => Keep::Inner,
            _ => Keep::Both,
        };
        // Corner points may touch the variable arms they cross; the arms lead
        // into a junction, so a point there never adds a choice.
        let mut allowed = around(i0);
        allowed.extend_from_slice(arms);
        if keep != Keep::Outer {
            self.point(a, Role::Corner, allowed.clone());
        }
        if keep != Keep::Inner {
            self.point(b, Role::Corner, allowed);
        }
        let actual = if dead { 1 - self.expect } else { self.expect };
        self.expect = 1 - actual;
        (i0, self.expect)
    }
}

/// Segment indices around a corner whose first step vertex is `i0`.
fn around(i0: usize) -> Vec<usize> {
    (i0 - 1..=i0 + 2).collect()
}

struct Layout {
    curve: Curve,
    points: Vec<Point>,
    roles: Vec<Role>,
    allowed: Vec<Vec<usize>>,
    /// (literal point, pass segment) per clause occurrence.
    probes: Vec<(usize, usize)>,
    /// Per variable, the points of its two corners in the order
    /// (first corner, second corner), each as (inner, outer).
    var_corners: Vec<[(usize, usize); 2]>,
    corners: usize,
}

fn layout(f: &CnfFormula) -> Result<Layout> {
    if !validate_3b2(f) {
        return Err(Error::InvalidFormula("not a (3,B2) formula".into()));
    }
    if f.num_vars == 0 {
        return Err(Error::InvalidFormula("the formula has no variables".into()));
    }
    let Route { passes, x_end } = route(f);
    let levels = passes.len();
    let level = |i: usize| {
        let h = FIRST_LEVEL + LEVEL_STEP * i as f64;
        if i % 2 == 0 { h } else { -h }
    };
    let top = FIRST_LEVEL + LEVEL_STEP * levels as f64 + 4.0;
    let mut d = Draw { verts: Vec::new(), points: Vec::new(), roles: Vec::new(), allowed: Vec::new(), corners: 0, var_corners: 2 * f.num_vars, expect: 0 };
    let mut arms = Vec::new();
    let mut var_corners = Vec::new();
    // Literal point index per (literal, down).
    let mut lit_points = vec![[usize::MAX; 2]; 2 * f.num_vars];

    for v in 0..f.num_vars {
        let x = var_x(v);
        d.vertex(Point::new(x, top));
        let s = d.verts.len() - 1;
        // Junction point at the top of the left arm; segment `s - 1` is the
        // horizontal from the previous variable.
        let allowed = if v == 0 { vec![s] } else { vec![s - 1, s] };
        d.point(Point::new(x + 1.0, top), Role::Junction, allowed);
        arms.push(s);

        let (a_in, a_out, i0) = d.corner(Point::new(x, 0.0), DOWN, RIGHT);
        let neg_a = d.point(a_in, Role::LiteralPoint, around(i0));
        let pos_a = d.point(a_out, Role::LiteralPoint, around(i0));
        let (b_in, b_out, i1) = d.corner(Point::new(x + VAR_WIDTH, 0.0), RIGHT, UP);
        let pos_b = d.point(b_in, Role::LiteralPoint, around(i1));
        let neg_b = d.point(b_out, Role::LiteralPoint, around(i1));
        d.vertex(Point::new(x + VAR_WIDTH, top));
        let s = d.verts.len() - 2;
        arms.push(s);
        d.point(Point::new(x + VAR_WIDTH - 1.0, top), Role::Junction, vec![s, s + 1]);
        var_corners.push([(neg_a, pos_a), (pos_b, neg_b)]);
        lit_points[2 * v + 1] = [pos_a, pos_b];
        lit_points[2 * v] = [neg_b, neg_a];
    }

    // Into the spiral through two more junction points.
    d.vertex(Point::new(x_end, top));
    let s = d.verts.len() - 2;
    d.point(Point::new(x_end, top), Role::Junction, vec![s, s + 1]);
    d.vertex(Point::new(x_end, level(0)));
    d.point(Point::new(x_end, level(0)), Role::Junction, vec![s + 1, s + 2]);

    let hdir = |i: usize| if i % 2 == 0 { LEFT } else { RIGHT };
    let pdir = |j: usize| if j % 2 == 1 { DOWN } else { UP };
    let mut probes = Vec::new();
    for (j, pass) in passes.iter().enumerate().map(|(j, p)| (j + 1, p)) {
        let (i0, out) = d.spiral_corner(Point::new(pass.col, level(j - 1)), hdir(j - 1), pdir(j), &arms, pass.opens_clause);
        if j == levels {
            // The closing pass ends after a short stub.
            let end = d.verts[i0 + 2] + pdir(j) * 2.0;
            d.vertex(end);
            let s = d.verts.len() - 2;
            let e = if out == 0 { end } else { end - hdir(j - 1) };
            d.point(e, Role::ClauseAnchor, vec![i0, i0 + 1, s]);
            break;
        }
        let seg = i0 + 2;
        if let Some(lit) = pass.probe {
            let down = j % 2 == 1;
            let idx = lit_points[2 * lit.var + lit.positive as usize][down as usize];
            debug_assert_eq!(d.points[idx], probe(lit, down).0);
            d.allowed[idx].push(seg);
            probes.push((idx, seg));
        }
        d.spiral_corner(Point::new(pass.col, level(j)), pdir(j), hdir(j), &arms, false);
    }

    let curve = Curve::new(d.verts)?;
    Ok(Layout {
        curve,
        points: d.points,
        roles: d.roles,
        allowed: d.allowed,
        probes,
        var_corners,
        corners: d.corners,
    })
}

impl Layout {
    /// Points that lie in the cylinder of a segment they were not placed for.
    fn stray_incidences(&self, eps: f64) -> Vec<(usize, usize)> {
        let segs: Vec<Segment> = self.curve.segments().collect();
        let mut out = Vec::new();
        for (a, &p) in self.points.iter().enumerate() {
            for (i, seg) in segs.iter().enumerate() {
                if in_cylinder(p, seg, eps) && !self.allowed[a].contains(&i) {
                    out.push((a, i));
                }
            }
        }
        out
    }

    fn scaled(&self, scale: f64) -> (Curve, Vec<Point>) {
        let curve = Curve::new(self.curve.vertices().iter().map(|&v| v * scale).collect()).expect("finite");
        (curve, self.points.iter().map(|&p| p * scale).collect())
    }
}

fn checked_layout(f: &CnfFormula, scale: f64) -> Result<Layout> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidInput(format!("scale must be positive, got {scale}")));
    }
    let l = layout(f)?;
    if let Some(&(a, i)) = l.stray_incidences(1.0).first() {
        return Err(Error::Unroutable(format!("point {a} strays into the cylinder of segment {i}")));
    }
    Ok(l)
}

/// Emits the vertex-unique subset instance for a (3,B2) formula: a
/// vertex-unique curve on the points within eps of `P` exists iff the formula
/// is satisfiable.
pub fn gen_unique_subset_instance(f: &CnfFormula, scale: f64) -> Result<GadgetInstance> {
    let l = checked_layout(f, scale)?;
    let (curve, points) = l.scaled(scale);
    Ok(GadgetInstance {
        curve,
        points: Some(PointSet::new(points)?),
        regions: None,
        eps: scale,
        scale,
        annotations: l.roles.iter().map(|r| r.tag().to_string()).collect(),
    })
}

/// The same layout with imprecise points: the two points of each variable
/// corner become one segment, and every other point becomes a segment
/// leaving the cylinders from its original position.
pub fn gen_imprecise_subset_instance(f: &CnfFormula, scale: f64) -> Result<GadgetInstance> {
    let l = checked_layout(f, scale)?;
    let (curve, points) = l.scaled(scale);
    let mut merged = vec![None; points.len()];
    for pair in l.var_corners.iter().flatten() {
        merged[pair.0] = Some(pair.1);
        merged[pair.1] = Some(usize::MAX);
    }
    let segs: Vec<Segment> = curve.segments().collect();
    let mut regions = Vec::new();
    let mut annotations = Vec::new();
    for (a, &p) in points.iter().enumerate() {
        match merged[a] {
            Some(usize::MAX) => continue,
            Some(b) => {
                regions.push(ImpreciseRegion { a: p, b: points[b] });
                annotations.push(Role::LiteralPoint.tag().to_string());
            }
            None => {
                regions.push(ImpreciseRegion { a: p, b: p + outward(p, &segs, scale) });
                annotations.push(l.roles[a].tag().to_string());
            }
        }
    }
    Ok(GadgetInstance { curve, points: None, regions: Some(regions), eps: scale, scale, annotations })
}

/// Offset of length `scale` along the axis or diagonal direction that moves
/// farthest from `P`.
fn outward(p: Point, segs: &[Segment], scale: f64) -> Point {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let dirs = [RIGHT, LEFT, UP, DOWN, Point::new(s, s), Point::new(-s, s), Point::new(s, -s), Point::new(-s, -s)];
    let clearance = |q: Point| segs.iter().map(|g| point_segment_distance(q, g)).fold(f64::INFINITY, f64::min);
    let best = dirs.into_iter().max_by(|a, b| clearance(p + *a * scale).total_cmp(&clearance(p + *b * scale))).unwrap();
    best * scale
}

/// Every literal point lies on the cylinder boundary of the pass that probes
/// it; returns the worst deviation from eps.
pub fn literal_boundary_deviation(f: &CnfFormula, scale: f64) -> Result<f64> {
    let l = checked_layout(f, scale)?;
    let (curve, points) = l.scaled(scale);
    Ok(l.probes
        .iter()
        .map(|&(a, seg)| (point_segment_distance(points[a], &curve.segment(seg)) - scale).abs())
        .fold(0.0, f64::max))
}

/// Number of double corners in the layout: two per variable and two per
/// spiral pass, less the closing pass's missing second corner.
pub fn corner_count(f: &CnfFormula) -> Result<usize> {
    Ok(layout(f)?.corners)
}

/// Vertical passes of the clause spiral, dummies included.
pub fn spiral_pass_count(f: &CnfFormula) -> Result<usize> {
    if !validate_3b2(f) || f.num_vars == 0 {
        return Err(Error::InvalidFormula("not a (3,B2) formula with variables".into()));
    }
    Ok(route(f).passes.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpsm::BruteForce;
    use crate::cpsm::SearchMode;
    use crate::reductions::sat_bruteforce;

    #[test]
    fn example_layout_is_clean() {
        let f = CnfFormula::example();
        let l = layout(&f).unwrap();
        assert_eq!(l.stray_incidences(1.0), vec![]);
        assert_eq!(l.corners, 2 * 3 + 2 * route(&f).passes.len() - 1);
        assert_eq!(l.probes.len(), 12);
        assert!(literal_boundary_deviation(&f, 1.0).unwrap() <= 1e-9);
    }

    #[test]
    fn routes_every_three_variable_formula() {
        let mut failed = 0;
        for f in super::super::enumerate_3b2(3) {
            if checked_layout(&f, 1.0).is_err() {
                failed += 1;
            }
        }
        assert_eq!(failed, 0);
    }

    #[test]
    fn scale_is_linear() {
        let f = CnfFormula::example();
        let a = gen_unique_subset_instance(&f, 1.0).unwrap();
        let b = gen_unique_subset_instance(&f, 2.0).unwrap();
        assert_eq!(b.eps, 2.0 * a.eps);
        for (u, v) in a.curve.vertices().iter().zip(b.curve.vertices()) {
            assert_eq!(*u * 2.0, *v);
        }
    }

    #[test]
    fn imprecise_counts() {
        let f = CnfFormula::example();
        let u = gen_unique_subset_instance(&f, 1.0).unwrap();
        let i = gen_imprecise_subset_instance(&f, 1.0).unwrap();
        assert_eq!(i.regions.unwrap().len(), u.points.unwrap().len() - 2 * f.num_vars);
    }

    #[test]
    fn brute_force_on_example() {
        let f = CnfFormula::example();
        let g = gen_unique_subset_instance(&f, 1.0).unwrap();
        let s = g.points.unwrap();
        let r = BruteForce::new(SearchMode::Subset, true).with_cap(Some(128)).run(&g.curve, &s, g.eps).unwrap();
        assert!(r.is_some());
    }

    #[test]
    #[ignore]
    fn brute_force_agrees_on_all_three_variable_formulas() {
        let mut wrong = Vec::new();
        for (i, f) in crate::reductions::enumerate_3b2(3).iter().enumerate() {
            let g = gen_unique_subset_instance(f, 1.0).unwrap();
            let s = g.points.unwrap();
            let found = BruteForce::new(SearchMode::Subset, true).with_cap(Some(128)).run(&g.curve, &s, g.eps).unwrap().is_some();
            if found != sat_bruteforce(f).unwrap().is_some() {
                wrong.push(i);
            }
        }
        assert!(wrong.is_empty(), "{wrong:?}");
    }

    #[test]
    fn brute_force_rejects_unsat() {
        let f = CnfFormula::from_signed(3, &[&[-1, -1, 2], &[1, 1, 2], &[-2, -3, -3], &[-2, 3, 3]]).unwrap();
        let g = gen_unique_subset_instance(&f, 1.0).unwrap();
        let s = g.points.unwrap();
        assert!(BruteForce::new(SearchMode::Subset, true).with_cap(Some(128)).run(&g.curve, &s, g.eps).unwrap().is_none());
    }
}
