use super::PointSet;
use crate::frechet::Curve;
use crate::geom::in_ball;

fn nearest_in_ball(center: crate::geom::Point, s: &PointSet, eps: f64) -> Option<usize> {
    (0..s.len())
        .filter(|&i| in_ball(s.get(i), center, eps))
        .min_by(|&a, &b| s.get(a).dist_sq(center).total_cmp(&s.get(b).dist_sq(center)))
}

/// Every vertex ball of `P` must hold a point of `S`. The witness lists the
/// nearest such point per vertex.
pub fn discrete_subset_decide(p: &Curve, s: &PointSet, eps: f64) -> Option<Vec<usize>> {
    p.vertices().iter().map(|&v| nearest_in_ball(v, s, eps)).collect()
}

/// Like [`discrete_subset_decide`], and additionally every point must lie in
/// some vertex ball. The witness groups points by their nearest covering
/// vertex (ties to the lower index), in vertex order.
pub fn discrete_allpoints_decide(p: &Curve, s: &PointSet, eps: f64) -> Option<Vec<usize>> {
    let per_vertex = discrete_subset_decide(p, s, eps)?;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); p.num_vertices()];
    for i in 0..s.len() {
        let pt = s.get(i);
        let owner = (0..p.num_vertices())
            .filter(|&v| in_ball(pt, p.vertex(v), eps))
            .min_by(|&a, &b| pt.dist_sq(p.vertex(a)).total_cmp(&pt.dist_sq(p.vertex(b))))?;
        groups[owner].push(i);
    }
    let mut q = Vec::with_capacity(s.len().max(p.num_vertices()));
    for (v, g) in groups.into_iter().enumerate() {
        if g.is_empty() {
            q.push(per_vertex[v]);
        } else {
            q.extend(g);
        }
    }
    Some(q)
}
