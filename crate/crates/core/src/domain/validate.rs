use super::model::{Edge, EdgeKind, ScherkDomain};
use crate::hyperbolic::{Endpoint, HPoint};
use serde::Serialize;

/// Rules checked by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// Two `A` (or two `B`) edges meet at a convex corner.
    CornerRule,
    /// Without `C` or `D` edges, neither `∪A` nor `∪B` may be connected.
    Connectivity,
    /// A curved `C` edge turns away from the domain.
    ConvexDataArc,
    /// An ideal vertex has no horocycle.
    MissingHorocycle,
    /// Two horocycles intersect.
    HorocycleOverlap,
    /// A horocycle meets an edge that does not end at its center.
    HorocycleMeetsEdge,
}

/// A violated rule with its location.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub rule: Rule,
    pub location: String,
    pub message: String,
}

const TURNING_TOL: f64 = 1e-8;
const EDGE_SAMPLES: usize = 256;

/// Checks the structural rules. An empty list means the domain is admissible.
pub fn validate(d: &ScherkDomain) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    corner_rule(d, &mut out);
    connectivity(d, &mut out);
    convex_arcs(d, &mut out);
    horocycles(d, &mut out);
    out
}

fn edge_name(d: &ScherkDomain, e: &Edge) -> String {
    format!("{:?}({}→{})", e.kind, d.names[e.from], d.names[e.to])
}

/// Euclidean unit tangent of an edge at one of its ends, in the direction of travel.
fn end_tangent(d: &ScherkDomain, e: &Edge, at_start: bool) -> Option<(f64, f64)> {
    let v = if at_start { e.from } else { e.to };
    let Endpoint::Interior(p) = d.vertices[v] else { return None };
    let t = if e.path.is_empty() {
        let g = d.edge_geodesic(e).ok()?;
        g.unit_tangent(p)
    } else {
        let q = if at_start { e.path[0] } else { e.path[e.path.len() - 1] };
        let (dx, dy) = if at_start { (q.x - p.x, q.y - p.y) } else { (p.x - q.x, p.y - q.y) };
        let n = dx.hypot(dy);
        (dx / n, dy / n)
    };
    Some(t)
}

/// A corner is convex when the interior angle is below `π`. Ideal corners
/// have angle zero and are always convex.
fn corner_is_convex(d: &ScherkDomain, incoming: &Edge, outgoing: &Edge) -> bool {
    if d.vertices[outgoing.from].is_ideal() {
        return true;
    }
    match (end_tangent(d, incoming, false), end_tangent(d, outgoing, true)) {
        (Some(a), Some(b)) => a.0 * b.1 - a.1 * b.0 > 1e-12,
        _ => true,
    }
}

fn corner_rule(d: &ScherkDomain, out: &mut Vec<Diagnostic>) {
    for comp in &d.components {
        for i in 0..comp.len() {
            let (e0, e1) = (&comp[i], &comp[(i + 1) % comp.len()]);
            let same = matches!((e0.kind, e1.kind), (EdgeKind::A, EdgeKind::A) | (EdgeKind::B, EdgeKind::B));
            if same && corner_is_convex(d, e0, e1) {
                out.push(Diagnostic {
                    rule: Rule::CornerRule,
                    location: d.names[e1.from].clone(),
                    message: format!("{} and {} meet at a convex corner", edge_name(d, e0), edge_name(d, e1)),
                });
            }
        }
    }
}

fn union_connected(d: &ScherkDomain, kind: EdgeKind) -> bool {
    let edges: Vec<&Edge> = d.edges().filter(|(_, _, e)| e.kind == kind).map(|(_, _, e)| e).collect();
    if edges.is_empty() {
        return true;
    }
    let mut parent: Vec<usize> = (0..d.vertex_count()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for e in &edges {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        parent[a] = b;
    }
    let root = find(&mut parent, edges[0].from);
    edges.iter().all(|e| find(&mut parent, e.from) == root)
}

fn connectivity(d: &ScherkDomain, out: &mut Vec<Diagnostic>) {
    if d.has_kind(EdgeKind::C) || d.has_kind(EdgeKind::D) {
        return;
    }
    for kind in [EdgeKind::A, EdgeKind::B] {
        if union_connected(d, kind) {
            out.push(Diagnostic {
                rule: Rule::Connectivity,
                location: format!("{kind:?} edges"),
                message: format!("the union of the {kind:?} edges is connected"),
            });
        }
    }
}

/// Hyperbolic turning of a polyline at its interior vertices: the geodesic
/// curvature of the circle through three consecutive points, taken with
/// respect to the left normal, times the local length element.
fn turning(points: &[(f64, f64)]) -> Vec<f64> {
    points
        .windows(3)
        .map(|w| {
            let (p0, p1, p2) = (w[0], w[1], w[2]);
            let (ux, uy) = (p0.0 - p1.0, p0.1 - p1.1);
            let (vx, vy) = (p2.0 - p1.0, p2.1 - p1.1);
            let (la, lb) = (ux.hypot(uy), vx.hypot(vy));
            let lc = (p2.0 - p0.0).hypot(p2.1 - p0.1);
            let cross = -(ux * vy - uy * vx);
            let y = p1.1;
            let kappa = 2.0 * cross / (la * lb * lc);
            let normal_term = (la * la * vx - lb * lb * ux) / (la * lb * lc);
            (y * kappa + normal_term) * 0.5 * (la + lb) / y
        })
        .collect()
}

fn convex_arcs(d: &ScherkDomain, out: &mut Vec<Diagnostic>) {
    for (_, _, e) in d.edges() {
        if e.kind != EdgeKind::C || e.path.is_empty() {
            continue;
        }
        let pts: Vec<(f64, f64)> = d.polyline(e).iter().filter_map(|p| p.position()).collect();
        if let Some((i, t)) = turning(&pts).into_iter().enumerate().find(|(_, t)| *t < -TURNING_TOL) {
            out.push(Diagnostic {
                rule: Rule::ConvexDataArc,
                location: edge_name(d, e),
                message: format!("the arc turns away from the domain at sample {} (turning {t:.3e})", i + 1),
            });
        }
    }
}

fn horocycles(d: &ScherkDomain, out: &mut Vec<Diagnostic>) {
    let ideal: Vec<usize> = (0..d.vertex_count()).filter(|&v| d.vertices[v].is_ideal()).collect();
    for &v in &ideal {
        if d.horocycles[v].is_none() {
            out.push(Diagnostic {
                rule: Rule::MissingHorocycle,
                location: d.names[v].clone(),
                message: "ideal vertex without a horocycle".into(),
            });
        }
    }
    for (i, &v) in ideal.iter().enumerate() {
        for &w in &ideal[i + 1..] {
            if let (Some(a), Some(b)) = (d.horocycles[v], d.horocycles[w]) {
                if !a.disjoint(&b) {
                    out.push(Diagnostic {
                        rule: Rule::HorocycleOverlap,
                        location: format!("{}, {}", d.names[v], d.names[w]),
                        message: "horocycles intersect".into(),
                    });
                }
            }
        }
    }
    for &v in &ideal {
        let Some(h) = d.horocycles[v] else { continue };
        for (_, _, e) in d.edges() {
            if e.from == v || e.to == v || e.kind == EdgeKind::D {
                continue;
            }
            let hit = d
                .sample_edge(e, EDGE_SAMPLES)
                .unwrap_or_default()
                .iter()
                .any(|p| matches!(p, Endpoint::Interior(q) if h.contains(HPoint::new_unchecked(q.x, q.y))));
            if hit {
                out.push(Diagnostic {
                    rule: Rule::HorocycleMeetsEdge,
                    location: d.names[v].clone(),
                    message: format!("horocycle meets {}", edge_name(d, e)),
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turning_of_a_geodesic_vanishes() {
        let pts: Vec<(f64, f64)> = (0..=10)
            .map(|k| {
                let t = 0.3 + 0.2 * k as f64;
                (t.cos(), t.sin())
            })
            .collect();
        assert!(turning(&pts).iter().all(|t| t.abs() < 1e-3));
    }
}
