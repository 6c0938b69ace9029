//! The truncated domain `Ω_n` used by the solver.
//!
//! Each ideal vertex between two geodesic edges is cut off by the geodesic
//! chord joining the points where its generation-`n` horocycle crosses the
//! two edges. Cap chords carry the value `0`; `A` and `B` edges carry `±m`
//! and data on `C` and `D` edges is clamped to `[-m, m]`.

use super::model::{geodesic_param, polyline_param, Edge, EdgeKind, ScherkDomain};
use crate::error::{Error, Result};
use crate::hyperbolic::{Endpoint, Geodesic, HPoint, IdealPoint};
use serde::Serialize;

/// Provenance of a boundary sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryTag {
    Edge { component: usize, index: usize, kind: EdgeKind },
    Cap { vertex: usize },
}

impl BoundaryTag {
    pub fn kind(&self) -> Option<EdgeKind> {
        match self {
            BoundaryTag::Edge { kind, .. } => Some(*kind),
            BoundaryTag::Cap { .. } => None,
        }
    }
}

/// A point of the truncated boundary in the closed half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySample {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub tag: BoundaryTag,
}

/// Closed rings of samples, one per boundary component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedBoundary {
    pub rings: Vec<Vec<BoundarySample>>,
    pub generation: u32,
    pub level: f64,
}

impl TruncatedBoundary {
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for s in self.rings.iter().flatten() {
            b = (b.0.min(s.x), b.1.max(s.x), b.2.min(s.y), b.3.max(s.y));
        }
        b
    }
}

fn capped(d: &ScherkDomain, v: usize) -> bool {
    if !d.vertices[v].is_ideal() {
        return false;
    }
    let (a, b) = d.incident(v);
    a.is_geodesic() && b.is_geodesic()
}

fn cut_point(d: &ScherkDomain, e: &Edge, v: usize, generation: u32) -> Result<Endpoint> {
    if !capped(d, v) {
        return Ok(d.vertices[v]);
    }
    let h = d
        .horocycle(v, generation)
        .ok_or_else(|| Error::Misconfiguration(format!("ideal vertex {} has no horocycle", d.names[v])))?;
    Ok(Endpoint::Interior(h.intersect_geodesic(&d.edge_geodesic(e)?)?))
}

fn edge_value(e: &Edge, t: f64, m: f64) -> f64 {
    match e.kind {
        EdgeKind::A => m,
        EdgeKind::B => -m,
        EdgeKind::C | EdgeKind::D => {
            let v = e.data.as_ref().map_or(0.0, |data| data.eval(t));
            v.clamp(-m, m)
        }
    }
}

/// Samples the boundary of `Ω_n` with level `m` on `A` and `B` edges.
pub fn truncated_boundary(d: &ScherkDomain, m: f64, generation: u32, per_edge: usize) -> Result<TruncatedBoundary> {
    if m.is_infinite() && (d.has_kind(EdgeKind::A) || d.has_kind(EdgeKind::B)) {
        return Err(Error::Misconfiguration("A and B edges need a finite truncation level".into()));
    }
    let mut rings = Vec::new();
    for (c, comp) in d.components.iter().enumerate() {
        let mut ring: Vec<BoundarySample> = Vec::new();
        for (i, e) in comp.iter().enumerate() {
            let tag = BoundaryTag::Edge { component: c, index: i, kind: e.kind };
            let pts: Vec<(f64, f64, f64)> = match e.kind {
                EdgeKind::D => (0..per_edge)
                    .map(|k| {
                        let t = k as f64 / per_edge as f64;
                        match d.edge_point(e, t)? {
                            Endpoint::Ideal(IdealPoint::Finite(x)) => Ok((x, 0.0, edge_value(e, t, m))),
                            _ => Err(Error::Grid("a D edge passing through ∞ cannot be gridded".into())),
                        }
                    })
                    .collect::<Result<_>>()?,
                _ if e.path.is_empty() => {
                    let full = d.edge_geodesic(e)?;
                    let a = cut_point(d, e, e.from, generation)?;
                    let b = cut_point(d, e, e.to, generation)?;
                    let g = Geodesic::between(a, b)?;
                    (0..per_edge)
                        .map(|k| {
                            let p = g.sample_param(k as f64 / per_edge as f64);
                            let (x, y) = p
                                .position()
                                .ok_or_else(|| Error::Grid(format!("vertex {} at ∞ must be truncated", d.names[e.from])))?;
                            let t = if y > 0.0 { geodesic_param(&full, HPoint::new_unchecked(x, y)) } else if k == 0 { 0.0 } else { 1.0 };
                            Ok((x, y, edge_value(e, t, m)))
                        })
                        .collect::<Result<_>>()?
                }
                _ => {
                    let poly: Vec<(f64, f64)> = d.polyline(e).iter().map(|p| p.position().unwrap_or((f64::NAN, f64::NAN))).collect();
                    if poly.iter().any(|p| p.0.is_nan()) {
                        return Err(Error::Grid("curved edges cannot end at ∞".into()));
                    }
                    let samples = d.sample_edge(e, per_edge)?;
                    samples[..samples.len() - 1]
                        .iter()
                        .map(|p| {
                            let (x, y) = p.position().unwrap();
                            Ok((x, y, edge_value(e, polyline_param(&poly, (x, y)), m)))
                        })
                        .collect::<Result<_>>()?
                }
            };
            ring.extend(pts.into_iter().map(|(x, y, value)| BoundarySample { x, y, value, tag }));
            let v = e.to;
            if capped(d, v) {
                let next = &comp[(i + 1) % comp.len()];
                let a = cut_point(d, e, v, generation)?;
                let b = cut_point(d, next, v, generation)?;
                let g = Geodesic::between(a, b)?;
                for k in 0..per_edge.div_ceil(4).max(4) {
                    let t = k as f64 / per_edge.div_ceil(4).max(4) as f64;
                    let (x, y) = g.sample_param(t).position().unwrap();
                    ring.push(BoundarySample { x, y, value: 0.0, tag: BoundaryTag::Cap { vertex: v } });
                }
            }
        }
        rings.push(ring);
    }
    Ok(TruncatedBoundary { rings, generation, level: m })
}
