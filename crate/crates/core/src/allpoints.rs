//! Restricted all-points matching, where every point must be visited at its
//! closest segment, and the 3-approximation for unrestricted all-points.

use serde::{Deserialize, Serialize};

use crate::cpsm::{
    critical_eps_candidates, search_with_table, Chords, MatchWitness, PointSet, ReachTable, Visit,
};
use crate::error::{Error, Result};
use crate::frechet::Curve;
use crate::geom::{in_ball, point_segment_distance, Point};
use crate::optimize::minimize_monotone;

/// `S_i`, `S*_i` and the end balls at one eps. Segments are 0-based.
#[derive(Debug, Clone)]
pub struct SegmentPointSets {
    pub members: Vec<Vec<usize>>,
    pub essential: Vec<Vec<usize>>,
    /// `S_0`, points in the ball around the start of `P`.
    pub start_ball: Vec<usize>,
    /// `S_{n+1}`, points in the ball around the end of `P`.
    pub end_ball: Vec<usize>,
    /// Closest segment per point, ties to the lowest index.
    pub closest: Vec<usize>,
    pub chords: Chords,
}

/// Per-segment membership flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryExitSets {
    pub entry: Vec<Vec<bool>>,
    pub exit: Vec<Vec<bool>>,
}

impl EntryExitSets {
    pub fn is_entry(&self, i: usize, t: usize) -> bool {
        self.entry[i][t]
    }

    pub fn is_exit(&self, i: usize, s: usize) -> bool {
        self.exit[i][s]
    }
}

pub fn closest_segment(p: &Curve, pt: Point) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, seg) in p.segments().enumerate() {
        let d = point_segment_distance(pt, &seg);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

pub fn compute_point_sets(p: &Curve, s: &PointSet, eps: f64) -> SegmentPointSets {
    let n = p.num_segments();
    let k = s.len();
    let chords = Chords::compute(p, s, eps);
    let members = (0..n).map(|i| (0..k).filter(|&a| chords.in_cylinder(i, a)).collect()).collect();
    let closest: Vec<usize> = s.points().iter().map(|&a| closest_segment(p, a)).collect();
    let mut essential = vec![Vec::new(); n];
    if n > 0 {
        for (a, &m) in closest.iter().enumerate() {
            essential[m].push(a);
        }
    }
    let start_ball = (0..k).filter(|&a| in_ball(s.get(a), p.start(), eps)).collect();
    let end_ball = (0..k).filter(|&a| in_ball(s.get(a), p.end(), eps)).collect();
    SegmentPointSets { members, essential, start_ball, end_ball, closest, chords }
}

/// False iff some point is in no cylinder or an end ball is empty.
pub fn preprocess_feasible(p: &Curve, s: &PointSet, eps: f64, sets: &SegmentPointSets) -> bool {
    if sets.start_ball.is_empty() || sets.end_ball.is_empty() {
        return false;
    }
    if p.num_segments() == 0 {
        return (0..s.len()).all(|a| in_ball(s.get(a), p.start(), eps));
    }
    let mut covered = vec![false; s.len()];
    for m in &sets.members {
        for &a in m {
            covered[a] = true;
        }
    }
    covered.into_iter().all(|c| c)
}

pub fn entry_exit_sets(sets: &SegmentPointSets) -> EntryExitSets {
    let n = sets.members.len();
    let k = sets.closest.len();
    let mut entry = vec![vec![false; k]; n];
    let mut exit = vec![vec![false; k]; n];
    for i in 0..n {
        let ess: Vec<_> = sets.essential[i].iter().map(|&e| sets.chords.get(i, e).expect("essential in cylinder")).collect();
        for &t in &sets.members[i] {
            let ct = sets.chords.get(i, t).unwrap();
            entry[i][t] = ess.iter().all(|ce| ct.lo <= ce.hi);
            exit[i][t] = ess.iter().all(|ce| ce.lo <= ct.hi);
        }
    }
    EntryExitSets { entry, exit }
}

/// `e_i`: the first later segment with essential points, or `n` as a stopper.
pub fn first_essential_after(sets: &SegmentPointSets) -> Vec<usize> {
    let n = sets.essential.len();
    let mut e = vec![n; n];
    let mut next = n;
    for i in (0..n).rev() {
        e[i] = next;
        if !sets.essential[i].is_empty() {
            next = i;
        }
    }
    e
}

/// `r'`: hops may not leave through a non-exit point, may not pass a segment
/// with essential points, and must land on an entry point.
pub fn modify_reachability(r: &ReachTable, sets: &SegmentPointSets, ee: &EntryExitSets, e: &[usize]) -> ReachTable {
    let n = r.num_segments();
    let k = r.num_points();
    let mut out = ReachTable::new(n, k);
    for i in 0..n {
        for a in 0..k {
            for t in 0..k {
                let Some(rv) = r.get(i, a, t) else { continue };
                let cap = if ee.is_exit(i, a) { rv.min(e[i]) } else { i };
                let hop = (i + 1..=cap).rev().find(|&j| ee.is_entry(j, t) && sets.chords.in_cylinder(j, t));
                let stay = match (sets.chords.get(i, a), sets.chords.get(i, t)) {
                    (Some(ca), Some(ct)) => ca.lo <= ct.hi,
                    _ => false,
                };
                out.set(i, a, t, hop.or(stay.then_some(i)));
            }
        }
    }
    out
}

/// Decides the restricted problem; on success the witness visits every point,
/// each at its closest segment.
pub fn restricted_allpoints_decide(p: &Curve, s: &PointSet, eps: f64) -> Option<MatchWitness> {
    if eps < 0.0 {
        return None;
    }
    let sets = compute_point_sets(p, s, eps);
    if !preprocess_feasible(p, s, eps, &sets) {
        return None;
    }
    if p.num_segments() == 0 {
        let visits = (0..s.len()).map(|a| Visit { point: a, segment: 0, position: 0.0 }).collect();
        return Some(MatchWitness::from_visits(visits));
    }
    let ee = entry_exit_sets(&sets);
    let e = first_essential_after(&sets);
    let r = crate::cpsm::reachability_table(p, s, eps);
    let r2 = modify_reachability(&r, &sets, &ee, &e);
    let skeleton = search_with_table(p, s, eps, &sets.chords, &r2)?;
    Some(fill_essentials(&skeleton, &sets))
}

/// Rebuilds each segment group as first point, essential points by chord,
/// last point.
fn fill_essentials(skeleton: &MatchWitness, sets: &SegmentPointSets) -> MatchWitness {
    let mut visits: Vec<Visit> = Vec::new();
    let mut groups: Vec<(usize, Vec<Visit>)> = Vec::new();
    for v in &skeleton.visits {
        match groups.last_mut() {
            Some((seg, g)) if *seg == v.segment => g.push(*v),
            _ => groups.push((v.segment, vec![*v])),
        }
    }
    for (seg, g) in groups {
        let mut ess: Vec<(f64, f64, usize)> = sets.essential[seg]
            .iter()
            .map(|&a| {
                let c = sets.chords.get(seg, a).unwrap();
                (c.lo, c.hi, a)
            })
            .collect();
        ess.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)));
        let first = g[0];
        let last = *g.last().unwrap();
        let mut pos = first.position;
        visits.push(first);
        for (lo, _, a) in ess {
            pos = pos.max(lo);
            visits.push(Visit { point: a, segment: seg, position: pos });
        }
        if g.len() > 1 || !sets.essential[seg].is_empty() {
            let lo = sets.chords.get(seg, last.point).unwrap().lo;
            pos = pos.max(lo);
            visits.push(Visit { point: last.point, segment: seg, position: pos });
        }
    }
    visits.dedup_by(|b, a| a.point == b.point && a.segment == b.segment);
    MatchWitness::from_visits(visits)
}

/// Smallest restricted eps to within `tol`.
pub fn restricted_allpoints_optimize(p: &Curve, s: &PointSet, tol: f64) -> Result<(f64, MatchWitness)> {
    let mut top: f64 = 0.0;
    for &a in s.points() {
        for &v in p.vertices() {
            top = top.max(a.dist(v));
        }
    }
    let cands = critical_eps_candidates(p, s);
    minimize_monotone(cands, top, tol, |e| restricted_allpoints_decide(p, s, e)).ok_or(Error::Infeasible { bracket: top })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub eps_hat: f64,
    /// `eps_hat` is at most this factor times the unrestricted optimum, up to tol.
    pub factor: f64,
    /// No point lies in two cylinders at `eps_hat`, so `eps_hat` is optimal.
    pub optimal: bool,
}

/// A curve through all of `S` within 3 times the best possible distance.
pub fn approx_allpoints(p: &Curve, s: &PointSet, tol: f64) -> Result<(f64, MatchWitness, Certificate)> {
    let (eps_hat, w) = restricted_allpoints_optimize(p, s, tol)?;
    let chords = Chords::compute(p, s, eps_hat);
    let optimal = (0..s.len()).all(|a| (0..p.num_segments()).filter(|&i| chords.in_cylinder(i, a)).count() <= 1);
    Ok((eps_hat, w, Certificate { eps_hat, factor: 3.0, optimal }))
}

/// The tightness example: restricted optimum about three times the
/// unrestricted one. `delta` lifts the two middle points toward the upper
/// segments.
pub fn tightness_instance(scale: f64, delta: f64) -> (Curve, PointSet) {
    let c = |x: f64, y: f64| Point::new(x * scale, y * scale);
    let p = Curve::new(vec![c(2.0, 0.0), c(8.0, 0.0), c(8.0, 2.0), c(14.0, 2.0), c(14.0, 0.0), c(20.0, 0.0), c(20.0, -2.0), c(6.0, -2.0)])
        .unwrap();
    let s = PointSet::new(vec![
        c(2.0, 1.0),
        c(6.0, -1.0 + delta),
        c(16.0, -1.0 + delta),
        c(20.0, 1.0),
        c(21.0, 0.0),
        c(21.0, -2.0),
        c(20.0, -3.0),
        c(5.0, -2.0),
        c(6.0, -3.0),
    ])
    .unwrap();
    (p, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ParamInterval;

    #[test]
    fn vertices_are_feasible_at_zero() {
        let p = Curve::from_xy(&[(0.0, 0.0), (3.0, 0.0), (3.0, 3.0)]).unwrap();
        let s = PointSet::new(p.vertices().to_vec()).unwrap();
        let w = restricted_allpoints_decide(&p, &s, 0.0).unwrap();
        assert!(w.covers_all(3));
    }

    #[test]
    fn far_point_fails_preprocessing() {
        let p = Curve::from_xy(&[(0.0, 0.0), (3.0, 0.0)]).unwrap();
        let s = PointSet::from_xy(&[(0.0, 0.0), (3.0, 0.0), (1.0, 10.0)]).unwrap();
        let sets = compute_point_sets(&p, &s, 1.0);
        assert!(!preprocess_feasible(&p, &s, 1.0, &sets));
        let s = PointSet::from_xy(&[(3.0, 0.0)]).unwrap();
        assert!(!preprocess_feasible(&p, &s, 1.0, &compute_point_sets(&p, &s, 1.0)));
    }

    #[test]
    fn tie_goes_to_lower_segment() {
        let p = Curve::from_xy(&[(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]).unwrap();
        // Equidistant from the first and last segments.
        assert_eq!(closest_segment(&p, Point::new(2.0, 2.0)), 0);
    }

    #[test]
    fn essential_stoppers() {
        let p = Curve::from_xy(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, 0.0)]).unwrap();
        let s = PointSet::from_xy(&[(2.5, 0.5)]).unwrap();
        let sets = compute_point_sets(&p, &s, 1.0);
        assert_eq!(sets.essential[2], vec![0]);
        assert_eq!(first_essential_after(&sets), vec![2, 2, 4, 4]);
    }

    #[test]
    fn entry_exit_by_definition() {
        let p = Curve::from_xy(&[(0.0, 0.0), (10.0, 0.0)]).unwrap();
        // Essential chord [0.4, 0.6]; the other chord [0.7, 0.9].
        let s = PointSet::from_xy(&[(5.0, 0.0), (8.0, 0.0)]).unwrap();
        let mut sets = compute_point_sets(&p, &s, 1.0);
        assert_eq!(sets.chords.get(0, 0), Some(ParamInterval::new(0.4, 0.6)));
        sets.essential[0] = vec![0];
        let ee = entry_exit_sets(&sets);
        assert!(!ee.is_entry(0, 1));
        assert!(ee.is_exit(0, 1));
        assert!(ee.is_entry(0, 0) && ee.is_exit(0, 0));
    }

    #[test]
    fn tightness_membership() {
        let (p, s) = tightness_instance(1.0, 0.01);
        let sets = compute_point_sets(&p, &s, 1.0);
        assert_eq!(sets.closest[1], 0);
        assert_eq!(sets.closest[2], 4);
    }
}
