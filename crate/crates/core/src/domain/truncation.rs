use super::inscribed::{InscribedPolygon, Side};
use super::model::{EdgeKind, ScherkDomain};
use crate::error::{Error, Result};
use crate::hyperbolic::{distance, truncated_side_length, Endpoint, Geodesic};
use serde::Serialize;

/// Truncated perimeter data of a polygon for one horocycle generation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationRow {
    pub generation: u32,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Total length of the horocycle-crossing chords that close the polygon.
    pub epsilon: f64,
    /// Set when two horodisks overlap along a side.
    pub degenerate: bool,
}

/// Length of a side after removing the generation-`n` horodisks.
pub fn side_length(d: &ScherkDomain, s: &Side, generation: u32) -> Result<f64> {
    let hp = d.horocycle(s.from, generation);
    let hq = d.horocycle(s.to, generation);
    truncated_side_length(d.vertices[s.from], d.vertices[s.to], hp.as_ref(), hq.as_ref())
}

/// Crossing of the generation-`n` horocycle at `v` with the side `s`.
fn crossing(d: &ScherkDomain, s: &Side, v: usize, generation: u32) -> Result<crate::hyperbolic::HPoint> {
    let h = d
        .horocycle(v, generation)
        .ok_or_else(|| Error::Misconfiguration(format!("ideal vertex {} has no horocycle", d.names[v])))?;
    h.intersect_geodesic(&Geodesic::between(d.vertices[s.from], d.vertices[s.to])?)
}

/// `(α_n, β_n, γ_n, ε_n)` of a polygon for each requested generation.
pub fn truncation_table(d: &ScherkDomain, p: &InscribedPolygon, generations: &[u32]) -> Result<Vec<TruncationRow>> {
    let mut rows = Vec::new();
    for &n in generations {
        let mut row = TruncationRow { generation: n, alpha: 0.0, beta: 0.0, gamma: 0.0, epsilon: 0.0, degenerate: false };
        for s in &p.sides {
            let len = match side_length(d, s, n) {
                Ok(l) => l,
                Err(Error::EmptySegment(_)) => {
                    row.degenerate = true;
                    0.0
                }
                Err(e) => return Err(e),
            };
            row.gamma += len;
            match s.edge_kind() {
                Some(EdgeKind::A) => row.alpha += len,
                Some(EdgeKind::B) => row.beta += len,
                _ => {}
            }
        }
        let k = p.sides.len();
        for i in 0..k {
            let v = p.sides[i].to;
            if let Endpoint::Ideal(_) = d.vertices[v] {
                let a = crossing(d, &p.sides[i], v, n)?;
                let b = crossing(d, &p.sides[(i + 1) % k], v, n)?;
                row.epsilon += distance(a, b);
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Total truncated lengths `(α_n, β_n)` of all `A` and `B` edges of the domain.
pub fn edge_totals(d: &ScherkDomain, generation: u32) -> Result<(f64, f64)> {
    let (mut alpha, mut beta) = (0.0, 0.0);
    for (c, i, e) in d.edges() {
        let s = Side { from: e.from, to: e.to, kind: super::inscribed::SideKind::Edge { component: c, index: i, kind: e.kind } };
        match e.kind {
            EdgeKind::A => alpha += side_length(d, &s, generation)?,
            EdgeKind::B => beta += side_length(d, &s, generation)?,
            _ => {}
        }
    }
    Ok((alpha, beta))
}
