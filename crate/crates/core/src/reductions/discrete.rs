//! The discrete imprecise construction: variable rings, transfer chains and
//! clause balls. Only region/ball incidences matter, so regions may cross.

use std::collections::BTreeSet;

use super::{validate_3b2, CnfFormula, GadgetInstance, Role};
use crate::error::{Error, Result};
use crate::frechet::Curve;
use crate::geom::{ball_segment_intersection, Point};
use crate::imprecise::ImpreciseRegion;

/// Distance between consecutive balls of a ring.
const RING_STEP: f64 = 2.4;
/// How far a region reaches into each of its two balls, from the centre.
const INSET: f64 = 0.8;
/// Offset of a port ball from the ring region it listens to.
const PORT_OFFSET: f64 = 0.9;
/// Gap between neighbouring rings.
const RING_GAP: f64 = 3.6;
/// Height of the lowest clause turn row above the ring row.
const CLAUSE_BASE: f64 = 4.5;
const CLAUSE_STEP: f64 = 4.8;

struct Builder {
    balls: Vec<Point>,
    regions: Vec<ImpreciseRegion>,
    roles: Vec<Role>,
    intended: Vec<BTreeSet<usize>>,
}

impl Builder {
    fn ball(&mut self, c: Point) -> usize {
        self.balls.push(c);
        self.balls.len() - 1
    }

    /// A region running from inside ball `a` to inside ball `b`.
    fn link(&mut self, a: usize, b: usize, role: Role) -> usize {
        let (pa, pb) = (self.balls[a], self.balls[b]);
        let u = (pb - pa) * (1.0 / pa.dist(pb));
        self.regions.push(ImpreciseRegion { a: pa + u * INSET, b: pb - u * INSET });
        self.roles.push(role);
        self.intended.push([a, b].into_iter().collect());
        self.regions.len() - 1
    }

    /// Checks that each region meets exactly its intended balls.
    fn audit(&self, eps: f64) -> Result<()> {
        for (r, reg) in self.regions.iter().enumerate() {
            let seg = reg.segment();
            let met: BTreeSet<usize> =
                (0..self.balls.len()).filter(|&b| ball_segment_intersection(&seg, self.balls[b], eps).is_some()).collect();
            if met != self.intended[r] {
                return Err(Error::Unroutable(format!(
                    "region {r} meets balls {met:?}, expected {:?}",
                    self.intended[r]
                )));
            }
        }
        Ok(())
    }

    fn finish(self, scale: f64) -> Result<GadgetInstance> {
        self.audit(1.0)?;
        let mut order: Vec<Point> = self.balls.clone();
        order.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        if order.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Unroutable("two balls share a centre".into()));
        }
        let s = |p: Point| p * scale;
        Ok(GadgetInstance {
            curve: Curve::new(order.into_iter().map(s).collect())?,
            points: None,
            regions: Some(self.regions.iter().map(|r| ImpreciseRegion { a: s(r.a), b: s(r.b) }).collect()),
            eps: scale,
            scale,
            annotations: self.roles.iter().map(|r| r.tag().to_string()).collect(),
        })
    }
}

struct Port {
    /// Ball that the ring region covers when the literal is true.
    ball: usize,
    x: f64,
}

/// Emits the construction for a (3,B2) formula: the vertex balls of the
/// returned curve can all be hit by a realization iff the formula is
/// satisfiable. Clauses alternate above and below the row of rings.
pub fn gen_discrete_cipsm_instance(f: &CnfFormula, scale: f64) -> Result<GadgetInstance> {
    if !validate_3b2(f) {
        return Err(Error::InvalidFormula("not a (3,B2) formula".into()));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidInput(format!("scale must be positive, got {scale}")));
    }
    let mut b = Builder { balls: Vec::new(), regions: Vec::new(), roles: Vec::new(), intended: Vec::new() };

    // Ring v: five balls along the top left to right, five along the bottom
    // right to left. Regions 0..4 run along the top, 5..9 along the bottom.
    let width = 4.0 * RING_STEP;
    let mut rings: Vec<Vec<usize>> = Vec::new();
    for v in 0..f.num_vars {
        let x0 = v as f64 * (width + RING_GAP);
        let mut ids = Vec::with_capacity(10);
        for i in 0..5 {
            ids.push(b.ball(Point::new(x0 + RING_STEP * i as f64, RING_STEP / 2.0)));
        }
        for i in (0..5).rev() {
            ids.push(b.ball(Point::new(x0 + RING_STEP * i as f64, -RING_STEP / 2.0)));
        }
        let regs: Vec<usize> = (0..10).map(|j| b.link(ids[j], ids[(j + 1) % 10], Role::VariableRing)).collect();
        rings.push(regs);
    }

    // Ports: a positive literal listens at the forward end of a ring region,
    // a negative one at the backward end.
    let mut next_free = vec![[0usize, 5usize]; f.num_vars];
    let mut ports: Vec<Vec<Port>> = Vec::with_capacity(f.clauses.len());
    for (c, clause) in f.clauses.iter().enumerate() {
        let above = c % 2 == 0;
        let side = if above { 0 } else { 1 };
        let mut cp = Vec::with_capacity(3);
        for lit in clause {
            let j = next_free[lit.var][side];
            if j >= if above { 4 } else { 9 } {
                return Err(Error::Unroutable(format!("variable {} has no free port", lit.var + 1)));
            }
            next_free[lit.var][side] += 1;
            let r = rings[lit.var][j];
            let reg = b.regions[r];
            let end = if lit.positive { reg.b } else { reg.a };
            let normal = Point::new(0.0, if above { 1.0 } else { -1.0 });
            let ball = b.ball(end + normal * PORT_OFFSET);
            b.intended[r].insert(ball);
            cp.push(Port { ball, x: end.x });
        }
        ports.push(cp);
    }

    // Chains: the middle port runs straight to the clause ball; the outer
    // ports turn at the clause row first.
    let mut rank = [0usize; 2];
    for (c, mut cp) in ports.into_iter().enumerate() {
        let above = c % 2 == 0;
        let sign = if above { 1.0 } else { -1.0 };
        let side = if above { 0 } else { 1 };
        let y = sign * (CLAUSE_BASE + CLAUSE_STEP * rank[side] as f64);
        rank[side] += 1;
        cp.sort_by(|a, b| a.x.total_cmp(&b.x));
        let clause_ball = b.ball(Point::new(cp[1].x, y + sign * RING_STEP));
        for (i, port) in cp.iter().enumerate() {
            if i == 1 {
                b.link(port.ball, clause_ball, Role::Transfer);
            } else {
                let turn = b.ball(Point::new(port.x, y));
                b.link(port.ball, turn, Role::Transfer);
                b.link(turn, clause_ball, Role::Transfer);
            }
        }
    }
    b.finish(scale)
}

/// A straight transfer chain of `len` regions. With `with_a` a precise point
/// sits on the first ball's boundary; with `demand_b` an extra ball at the far
/// end must be hit by the last region.
pub fn transfer_chain(len: usize, with_a: bool, demand_b: bool, scale: f64) -> Result<GadgetInstance> {
    if len == 0 {
        return Err(Error::InvalidInput("a chain needs at least one region".into()));
    }
    let mut b = Builder { balls: Vec::new(), regions: Vec::new(), roles: Vec::new(), intended: Vec::new() };
    let at = |i: usize| Point::new(RING_STEP * i as f64, 0.2 * (i % 2) as f64);
    for i in 0..len {
        b.ball(at(i));
    }
    // The far end of the last region sits where the next ball would be.
    let end = b.ball(at(len));
    for i in 0..len {
        b.link(i, i + 1, Role::Transfer);
    }
    if with_a {
        b.regions.push(ImpreciseRegion::point(at(0) - Point::new(1.0, 0.0)));
        b.roles.push(Role::Transfer);
        b.intended.push([0].into_iter().collect());
    }
    if !demand_b {
        b.balls.pop();
        for set in &mut b.intended {
            set.remove(&end);
        }
        // The last region keeps its reach into the vacated spot.
    }
    b.finish(scale)
}
