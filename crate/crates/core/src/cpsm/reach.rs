//! Reachability tables and the subset decision built on them.

use super::{MatchWitness, PointSet, Visit};
use crate::frechet::Curve;
use crate::geom::{ball_segment_intersection, in_ball, ParamInterval, Segment};
use crate::optimize::minimize_monotone;

/// `P_i[s]`: the part of segment `i` within eps of point `s`.
#[derive(Debug, Clone)]
pub struct Chords {
    n: usize,
    k: usize,
    data: Vec<Option<ParamInterval>>,
}

impl Chords {
    pub fn compute(p: &Curve, s: &PointSet, eps: f64) -> Self {
        let n = p.num_segments();
        let k = s.len();
        let mut data = Vec::with_capacity(n * k);
        for seg in p.segments() {
            for &pt in s.points() {
                data.push(ball_segment_intersection(&seg, pt, eps));
            }
        }
        Chords { n, k, data }
    }

    pub fn num_segments(&self) -> usize {
        self.n
    }

    pub fn num_points(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, s: usize) -> Option<ParamInterval> {
        self.data[i * self.k + s]
    }

    /// Whether `s` lies in cylinder `C_i`.
    pub fn in_cylinder(&self, i: usize, s: usize) -> bool {
        self.get(i, s).is_some()
    }
}

/// `r[i][s][t]` with 0-based segments; `None` when no extension exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachTable {
    n: usize,
    k: usize,
    data: Vec<Option<u32>>,
}

impl ReachTable {
    pub fn new(n: usize, k: usize) -> Self {
        ReachTable { n, k, data: vec![None; n * k * k] }
    }

    pub fn num_segments(&self) -> usize {
        self.n
    }

    pub fn num_points(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, s: usize, t: usize) -> Option<usize> {
        self.data[(i * self.k + s) * self.k + t].map(|j| j as usize)
    }

    pub fn set(&mut self, i: usize, s: usize, t: usize, j: Option<usize>) {
        debug_assert!(j.is_none_or(|j| j >= i && j < self.n));
        self.data[(i * self.k + s) * self.k + t] = j.map(|j| j as u32);
    }
}

/// Largest `j > i` at which the edge `s -> t`, leaving segment `i` through its
/// far end, can place `t`. Independent of where `s` sits on `P_i`.
fn cross_reach(p: &Curve, s: &PointSet, chords: &Chords, eps: f64, i: usize, a: usize, t: usize) -> Option<usize> {
    let n = p.num_segments();
    if i + 1 >= n {
        return None;
    }
    let edge = Segment::new(s.get(a), s.get(t));
    let mut reach_lo = ball_segment_intersection(&edge, p.vertex(i + 1), eps)?.lo;
    let mut best = None;
    for m in i + 1..n {
        if chords.in_cylinder(m, t) {
            best = Some(m);
        }
        if m + 1 == n {
            break;
        }
        let Some(gate) = ball_segment_intersection(&edge, p.vertex(m + 1), eps) else { break };
        reach_lo = reach_lo.max(gate.lo);
        if reach_lo > gate.hi {
            break;
        }
    }
    best
}

/// Builds `r` from the leftmost feasible position of each `s` on each `P_i`.
pub fn reachability_table(p: &Curve, s: &PointSet, eps: f64) -> ReachTable {
    let chords = Chords::compute(p, s, eps);
    table_from_chords(p, s, &chords, eps)
}

pub(crate) fn table_from_chords(p: &Curve, s: &PointSet, chords: &Chords, eps: f64) -> ReachTable {
    let n = p.num_segments();
    let k = s.len();
    let mut r = ReachTable::new(n, k);
    for i in 0..n {
        for a in 0..k {
            let Some(ca) = chords.get(i, a) else { continue };
            for t in 0..k {
                let same = chords.get(i, t).is_some_and(|ct| ca.lo <= ct.hi);
                let j = cross_reach(p, s, chords, eps, i, a, t).or(same.then_some(i));
                r.set(i, a, t, j);
            }
        }
    }
    r
}

#[derive(Debug, Clone, Copy)]
enum Pred {
    Start,
    Within(usize),
    Cross { from: usize, seg: usize },
}

/// Leftmost-position search over `(point, segment)` states. Moves inside a
/// segment follow the chords; moves to later segments follow `table`, which
/// may be a restricted table.
pub fn search_with_table(p: &Curve, s: &PointSet, eps: f64, chords: &Chords, table: &ReachTable) -> Option<MatchWitness> {
    let k = s.len();
    let n = p.num_segments();
    if n == 0 {
        let a = (0..k).find(|&a| in_ball(s.get(a), p.start(), eps))?;
        return Some(MatchWitness::from_visits(vec![Visit { point: a, segment: 0, position: 0.0 }]));
    }
    let mut best = vec![f64::INFINITY; n * k];
    let mut pred: Vec<Option<Pred>> = vec![None; n * k];
    for a in 0..k {
        if chords.get(0, a).is_some_and(|c| c.lo == 0.0) {
            best[a] = 0.0;
            pred[a] = Some(Pred::Start);
        }
    }
    for i in 0..n {
        let row = i * k;
        let mut done = vec![false; k];
        loop {
            let mut pick: Option<usize> = None;
            for a in 0..k {
                if !done[a] && best[row + a].is_finite() && pick.is_none_or(|b| best[row + a] < best[row + b]) {
                    pick = Some(a);
                }
            }
            let Some(a) = pick else { break };
            done[a] = true;
            let pa = best[row + a];
            for t in 0..k {
                if done[t] {
                    continue;
                }
                if let Some(ct) = chords.get(i, t) {
                    if pa <= ct.hi {
                        let cand = pa.max(ct.lo);
                        if cand <= best[row + t] {
                            best[row + t] = cand;
                            pred[row + t] = Some(Pred::Within(a));
                        }
                    }
                }
            }
        }
        for a in (0..k).filter(|&a| done[a]) {
            for t in 0..k {
                let Some(r) = table.get(i, a, t) else { continue };
                for j in i + 1..=r {
                    if let Some(ct) = chords.get(j, t) {
                        if ct.lo < best[j * k + t] {
                            best[j * k + t] = ct.lo;
                            pred[j * k + t] = Some(Pred::Cross { from: a, seg: i });
                        }
                    }
                }
            }
        }
    }
    let last = (n - 1) * k;
    let end = (0..k).find(|&t| best[last + t].is_finite() && chords.get(n - 1, t).is_some_and(|c| c.hi == 1.0))?;

    let mut visits = Vec::new();
    let (mut a, mut i) = (end, n - 1);
    loop {
        visits.push(Visit { point: a, segment: i, position: best[i * k + a] });
        match pred[i * k + a].expect("finite state has a predecessor") {
            Pred::Start => break,
            Pred::Within(b) => a = b,
            Pred::Cross { from, seg } => (a, i) = (from, seg),
        }
    }
    visits.reverse();
    Some(MatchWitness::from_visits(visits))
}

/// Is there a curve on `S` (repeats and omissions allowed) within eps of `P`?
pub fn continuous_subset_decide(p: &Curve, s: &PointSet, eps: f64) -> Option<MatchWitness> {
    if eps < 0.0 {
        return None;
    }
    let chords = Chords::compute(p, s, eps);
    let table = table_from_chords(p, s, &chords, eps);
    search_with_table(p, s, eps, &chords, &table)
}

/// Smallest eps (to within `tol`) admitting a subset curve, with its witness.
pub fn continuous_subset_optimize(p: &Curve, s: &PointSet, tol: f64) -> (f64, MatchWitness) {
    let top = bracket_top(p, s);
    let cands = super::critical_eps_candidates(p, s);
    minimize_monotone(cands, top, tol, |e| continuous_subset_decide(p, s, e))
        .expect("a single point always matches at the bracket top")
}

/// Max distance between a point and a vertex: any single point then covers `P`.
pub(crate) fn bracket_top(p: &Curve, s: &PointSet) -> f64 {
    let mut top: f64 = 0.0;
    for &a in s.points() {
        for &v in p.vertices() {
            top = top.max(a.dist(v));
        }
    }
    top
}
