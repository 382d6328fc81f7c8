//! Exhaustive search over vertex sequences from `S`, tracking the reachable
//! part of the free-space row at the current vertex.

use std::collections::HashMap;

use super::PointSet;
use crate::error::{Error, Result};
use crate::frechet::Curve;
use crate::geom::{free_space_cell, in_ball, point_segment_distance, Segment};

pub const DEFAULT_SUBSET_CAP: usize = 9;
pub const DEFAULT_ALLPOINTS_CAP: usize = 7;
const MASK_BITS: usize = 128;

/// Brute-force cap override from `CURVE_MATCH_CAP`, if set and parseable.
pub fn cap_from_env() -> Option<usize> {
    std::env::var("CURVE_MATCH_CAP").ok()?.trim().parse().ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Any sequence from `S`.
    Subset,
    /// Every point must appear.
    AllPoints,
    /// Every point must be matched somewhere on its closest segment.
    Restricted,
}

#[derive(Debug, Clone)]
pub struct BruteForce {
    pub mode: SearchMode,
    /// No point may be used twice.
    pub unique: bool,
    /// Limit on `k`; the mode default when `None`.
    pub cap: Option<usize>,
    /// Bound the sequence length by `(n+1)k` for repeat-allowing searches.
    pub length_cap: bool,
}

/// One search node: the last vertex and, per segment of `P`, the leftmost
/// reachable parameter on the free row at that vertex.
#[derive(Clone)]
struct Node {
    last: usize,
    row: Vec<Option<f64>>,
    mask: u128,
    used: u128,
    depth: usize,
    parent: usize,
}

impl BruteForce {
    pub fn new(mode: SearchMode, unique: bool) -> Self {
        BruteForce { mode, unique, cap: None, length_cap: true }
    }

    pub fn with_cap(mut self, cap: Option<usize>) -> Self {
        self.cap = cap;
        self
    }

    pub fn unbounded(mut self) -> Self {
        self.length_cap = false;
        self
    }

    fn effective_cap(&self) -> usize {
        let default = match self.mode {
            SearchMode::Subset => DEFAULT_SUBSET_CAP,
            SearchMode::AllPoints | SearchMode::Restricted => DEFAULT_ALLPOINTS_CAP,
        };
        self.cap.or_else(cap_from_env).unwrap_or(default).min(MASK_BITS)
    }

    /// A matching vertex sequence, or `None` if there is none.
    pub fn run(&self, p: &Curve, s: &PointSet, eps: f64) -> Result<Option<Vec<usize>>> {
        let k = s.len();
        let cap = self.effective_cap();
        if k > cap {
            return Err(Error::InstanceTooLarge { what: "point set", size: k, cap });
        }
        if eps < 0.0 {
            return Ok(None);
        }
        if p.num_segments() == 0 {
            return Ok(self.single_vertex(p, s, eps));
        }
        if self.unique {
            return Ok(self.depth_first(p, s, eps));
        }
        Ok(self.search(p, s, eps))
    }

    fn single_vertex(&self, p: &Curve, s: &PointSet, eps: f64) -> Option<Vec<usize>> {
        let inside: Vec<usize> = (0..s.len()).filter(|&a| in_ball(s.get(a), p.start(), eps)).collect();
        match self.mode {
            SearchMode::Subset => inside.first().map(|&a| vec![a]),
            _ => (inside.len() == s.len()).then_some(inside),
        }
    }

    fn search(&self, p: &Curve, s: &PointSet, eps: f64) -> Option<Vec<usize>> {
        let n = p.num_segments();
        let k = s.len();
        let segs: Vec<Segment> = p.segments().collect();
        let full: u128 = if k == MASK_BITS { u128::MAX } else { (1u128 << k) - 1 };
        let closest = closest_segments(&segs, s);
        let max_len = if self.unique {
            k
        } else if self.length_cap {
            (n + 1) * k
        } else {
            usize::MAX
        };

        let mut nodes: Vec<Node> = Vec::new();
        let mut seen: HashMap<(usize, Vec<u64>, u128, u128), ()> = HashMap::new();
        let key = |node: &Node| {
            let row = node.row.iter().map(|x| x.map_or(u64::MAX, f64::to_bits)).collect::<Vec<_>>();
            (node.last, row, node.mask, if self.unique { node.used } else { 0 })
        };

        for a in 0..k {
            let Some(row) = start_row(&segs, s.get(a), eps) else { continue };
            let base = Node { last: a, row, mask: 0, used: 1 << a, depth: 1, parent: usize::MAX };
            for node in self.visit(base, a, &segs, s, eps, &closest) {
                if seen.insert(key(&node), ()).is_none() {
                    nodes.push(node);
                }
            }
        }

        let mut head = 0;
        while head < nodes.len() {
            let cur = nodes[head].clone();
            if self.accepts(&cur, &segs, s, eps, full) {
                return Some(self.trace(&nodes, head));
            }
            if cur.depth < max_len {
                for t in 0..k {
                    if t == cur.last || (self.unique && cur.used >> t & 1 == 1) {
                        continue;
                    }
                    let Some(row) = step(&cur.row, &segs, s.get(cur.last), s.get(t), eps) else { continue };
                    let next = Node { last: t, row, mask: cur.mask, used: cur.used | 1 << t, depth: cur.depth + 1, parent: head };
                    for node in self.visit(next, t, &segs, s, eps, &closest) {
                        if seen.insert(key(&node), ()).is_none() {
                            nodes.push(node);
                        }
                    }
                }
            }
            head += 1;
        }
        None
    }

    /// Unique searches go depth first: the path is at most `k` long, so only
    /// states known to fail are stored.
    fn depth_first(&self, p: &Curve, s: &PointSet, eps: f64) -> Option<Vec<usize>> {
        let k = s.len();
        let segs: Vec<Segment> = p.segments().collect();
        let reach: Vec<(f64, f64)> = (0..k).map(|a| reach_span(&segs, s.get(a), eps)).collect();
        // Candidates whose balls leave P soonest come first.
        let mut order: Vec<usize> = (0..k).filter(|&a| reach[a].0.is_finite()).collect();
        order.sort_by(|&a, &b| reach[a].1.total_cmp(&reach[b].1).then(a.cmp(&b)));
        let mut dfs = Dfs {
            bf: self,
            closest: closest_segments(&segs, s),
            segs,
            s,
            eps,
            full: if k == MASK_BITS { u128::MAX } else { (1u128 << k) - 1 },
            reach,
            order,
            failed: HashMap::new(),
            path: Vec::with_capacity(k),
        };
        for &a in &dfs.order.clone() {
            let Some(row) = start_row(&dfs.segs, s.get(a), eps) else { continue };
            let base = Node { last: a, row, mask: 0, used: 1 << a, depth: 1, parent: usize::MAX };
            if dfs.try_visit(base, a) {
                return Some(dfs.path);
            }
        }
        None
    }

    /// Records that `a` was appended. In restricted mode the visit may
    /// additionally be pinned to the closest segment of `a`.
    fn visit(&self, mut node: Node, a: usize, segs: &[Segment], s: &PointSet, eps: f64, closest: &[usize]) -> Vec<Node> {
        match self.mode {
            SearchMode::Subset | SearchMode::AllPoints => {
                node.mask |= 1 << a;
                vec![node]
            }
            SearchMode::Restricted => {
                let m = closest[a];
                let mut out = Vec::with_capacity(2);
                if node.mask >> a & 1 == 0 {
                    if let Some(row) = pin(&node.row, m, segs, s.get(a), eps) {
                        out.push(Node { row, mask: node.mask | 1 << a, ..node.clone() });
                    }
                }
                out.push(node);
                out
            }
        }
    }

    fn accepts(&self, node: &Node, segs: &[Segment], s: &PointSet, eps: f64, full: u128) -> bool {
        let n = segs.len();
        let at_end = node.row[n - 1].is_some() && in_ball(s.get(node.last), segs[n - 1].b, eps);
        at_end && (self.mode == SearchMode::Subset || node.mask == full)
    }

    fn trace(&self, nodes: &[Node], mut idx: usize) -> Vec<usize> {
        let mut seq = Vec::new();
        while idx != usize::MAX {
            seq.push(nodes[idx].last);
            idx = nodes[idx].parent;
        }
        seq.reverse();
        seq
    }
}

struct Dfs<'a> {
    bf: &'a BruteForce,
    segs: Vec<Segment>,
    s: &'a PointSet,
    eps: f64,
    full: u128,
    closest: Vec<usize>,
    /// Per point, the first and last positions on P inside its ball.
    reach: Vec<(f64, f64)>,
    order: Vec<usize>,
    /// Failed used sets per (last, row, mask).
    failed: HashMap<(usize, Vec<u64>, u128), Vec<u128>>,
    path: Vec<usize>,
}

impl Dfs<'_> {
    fn try_visit(&mut self, node: Node, a: usize) -> bool {
        for node in self.bf.visit(node, a, &self.segs, self.s, self.eps, &self.closest) {
            self.path.push(a);
            if self.descend(node) {
                return true;
            }
            self.path.pop();
        }
        false
    }

    fn descend(&mut self, cur: Node) -> bool {
        if self.bf.accepts(&cur, &self.segs, self.s, self.eps, self.full) {
            return true;
        }
        // Points whose balls end before the leftmost reachable position can
        // never be appended again, so their use does not matter.
        let front = cur.row.iter().position(Option::is_some).map_or(f64::INFINITY, |i| i as f64 + cur.row[i].unwrap());
        let live = (0..self.s.len()).filter(|&t| self.reach[t].1 >= front).fold(1u128 << cur.last, |m, t| m | 1 << t);
        // In subset mode the mask plays no part in acceptance, and using more
        // points only removes options, so a failed used set fails all supersets.
        let subset = self.bf.mode == SearchMode::Subset;
        let row_key = cur.row.iter().map(|x| x.map_or(u64::MAX, f64::to_bits)).collect::<Vec<_>>();
        let key = (cur.last, row_key, if subset { 0 } else { cur.mask & live });
        let used = cur.used & live;
        if let Some(sets) = self.failed.get(&key) {
            if sets.iter().any(|&f| if subset { f & !used == 0 } else { f == used }) {
                return false;
            }
        }
        for i in 0..self.order.len() {
            let t = self.order[i];
            if cur.used >> t & 1 == 1 || self.reach[t].1 < front {
                continue;
            }
            let Some(row) = step(&cur.row, &self.segs, self.s.get(cur.last), self.s.get(t), self.eps) else { continue };
            let next = Node { last: t, row, mask: cur.mask, used: cur.used | 1 << t, depth: cur.depth + 1, parent: 0 };
            if self.try_visit(next, t) {
                return true;
            }
        }
        let sets = self.failed.entry(key).or_default();
        if subset {
            sets.retain(|&f| used & !f != 0);
        }
        sets.push(used);
        false
    }
}

/// The first and last positions on P (segment index plus parameter) inside
/// the ball around `a`; infinite if the ball misses P.
fn reach_span(segs: &[Segment], a: crate::geom::Point, eps: f64) -> (f64, f64) {
    let mut span = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, seg) in segs.iter().enumerate() {
        if let Some(c) = crate::geom::ball_segment_intersection(seg, a, eps) {
            span.0 = span.0.min(i as f64 + c.lo);
            span.1 = span.1.max(i as f64 + c.hi);
        }
    }
    span
}

fn closest_segments(segs: &[Segment], s: &PointSet) -> Vec<usize> {
    (0..s.len())
        .map(|a| {
            let mut best = 0;
            for i in 1..segs.len() {
                if point_segment_distance(s.get(a), &segs[i]) < point_segment_distance(s.get(a), &segs[best]) {
                    best = i;
                }
            }
            best
        })
        .collect()
}

/// The row after starting at `a`: the prefix of P covered by its ball from
/// P's start, or `None` if the ball misses the start.
fn start_row(segs: &[Segment], a: crate::geom::Point, eps: f64) -> Option<Vec<Option<f64>>> {
    let mut row = vec![None; segs.len()];
    for i in 0..segs.len() {
        match crate::geom::ball_segment_intersection(&segs[i], a, eps) {
            Some(c) if c.lo == 0.0 => {
                row[i] = Some(0.0);
                if c.hi < 1.0 {
                    break;
                }
            }
            _ => break,
        }
    }
    row[0].map(|_| row)
}

/// Propagates the reachable row through the free-space row of edge `a -> b`.
fn step(row: &[Option<f64>], segs: &[Segment], a: crate::geom::Point, b: crate::geom::Point, eps: f64) -> Option<Vec<Option<f64>>> {
    let edge = Segment::new(a, b);
    let mut out = vec![None; segs.len()];
    // The left side of the diagram is open only while the path sits at P's start.
    let mut left: Option<f64> = if row[0] == Some(0.0) {
        free_space_cell(&segs[0], &edge, eps).left.map(|l| l.lo)
    } else {
        None
    };
    let mut any = false;
    for (i, seg) in segs.iter().enumerate() {
        let cell = free_space_cell(seg, &edge, eps);
        let from_bottom = row[i];
        out[i] = cell.top.and_then(|t| {
            if left.is_some() {
                Some(t.lo)
            } else {
                from_bottom.map(|l| l.max(t.lo)).filter(|&lo| lo <= t.hi)
            }
        });
        left = cell.right.and_then(|r| {
            if from_bottom.is_some() {
                Some(r.lo)
            } else {
                left.map(|l| l.max(r.lo)).filter(|&lo| lo <= r.hi)
            }
        });
        any |= out[i].is_some();
    }
    any.then_some(out)
}

/// Keeps only the part of the row reachable by passing through segment `m`.
fn pin(row: &[Option<f64>], m: usize, segs: &[Segment], a: crate::geom::Point, eps: f64) -> Option<Vec<Option<f64>>> {
    let start = row[m]?;
    let mut out = vec![None; segs.len()];
    out[m] = Some(start);
    let mut open = crate::geom::ball_segment_intersection(&segs[m], a, eps)?.hi == 1.0;
    for i in m + 1..segs.len() {
        if !open {
            break;
        }
        match crate::geom::ball_segment_intersection(&segs[i], a, eps) {
            Some(c) if c.lo == 0.0 => {
                out[i] = Some(0.0);
                open = c.hi == 1.0;
            }
            _ => break,
        }
    }
    Some(out)
}

pub fn brute_force_subset_decide(p: &Curve, s: &PointSet, eps: f64, unique: bool) -> Result<bool> {
    Ok(BruteForce::new(SearchMode::Subset, unique).run(p, s, eps)?.is_some())
}

pub fn brute_force_allpoints_decide(p: &Curve, s: &PointSet, eps: f64, unique: bool) -> Result<bool> {
    Ok(BruteForce::new(SearchMode::AllPoints, unique).run(p, s, eps)?.is_some())
}

/// All-points search where each point must be matched on its closest segment
/// (ties to the lowest index).
pub fn brute_force_restricted_decide(p: &Curve, s: &PointSet, eps: f64) -> Result<bool> {
    Ok(BruteForce::new(SearchMode::Restricted, false).run(p, s, eps)?.is_some())
}
