use super::model::{crossing_parity, EdgeKind, ScherkDomain};
use crate::error::{Error, Result};
use crate::hyperbolic::disk::endpoint_to_disk;
use crate::hyperbolic::{Endpoint, Geodesic, GeodesicLine};
use serde::Serialize;

/// Caps on the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnumerationLimits {
    pub max_vertices: usize,
    pub max_candidates: usize,
    pub chord_samples: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self { max_vertices: 16, max_candidates: 20_000, chord_samples: 64 }
    }
}

/// How a side of an inscribed polygon sits in the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SideKind {
    /// The side is a geodesic boundary edge.
    Edge { component: usize, index: usize, kind: EdgeKind },
    /// The side is a geodesic chord through the interior.
    Chord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Side {
    pub from: usize,
    pub to: usize,
    pub kind: SideKind,
}

impl Side {
    pub fn edge_kind(&self) -> Option<EdgeKind> {
        match self.kind {
            SideKind::Edge { kind, .. } => Some(kind),
            SideKind::Chord => None,
        }
    }
}

/// A geodesic polygon whose vertices are vertices of the domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InscribedPolygon {
    pub vertices: Vec<usize>,
    pub sides: Vec<Side>,
    pub is_whole_domain: bool,
}

impl InscribedPolygon {
    pub fn label(&self, d: &ScherkDomain) -> String {
        self.vertices.iter().map(|v| d.names[*v].as_str()).collect::<Vec<_>>().join("-")
    }
}

struct Context<'a> {
    d: &'a ScherkDomain,
    rings: Vec<Vec<(f64, f64)>>,
    chord_ok: Vec<Option<bool>>,
    hole_points: Vec<(f64, f64)>,
    samples: usize,
}

impl Context<'_> {
    fn chord_inside(&mut self, u: usize, v: usize) -> bool {
        let n = self.d.vertex_count();
        let key = u.min(v) * n + u.max(v);
        if let Some(ok) = self.chord_ok[key] {
            return ok;
        }
        let ok = match Geodesic::between(self.d.vertices[u], self.d.vertices[v]) {
            Ok(g) => (0..self.samples).all(|k| {
                let t = (k + 1) as f64 / (self.samples + 1) as f64;
                let w = endpoint_to_disk(g.sample_param(t));
                self.d.contains_disk(&self.rings, w)
            }),
            Err(_) => false,
        };
        self.chord_ok[key] = Some(ok);
        ok
    }
}

/// Finds the geodesic boundary edge joining two vertices, in either direction.
fn boundary_side(d: &ScherkDomain, u: usize, v: usize) -> Option<SideKind> {
    d.edges().find_map(|(c, i, e)| {
        ((e.from == u && e.to == v) || (e.from == v && e.to == u))
            .then_some(e)
            .filter(|e| e.is_geodesic())
            .map(|e| SideKind::Edge { component: c, index: i, kind: e.kind })
    })
}

/// A point just outside the domain next to each hole.
fn hole_points(d: &ScherkDomain) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for comp in d.components.iter().skip(1) {
        let e = &comp[0];
        let (Ok(a), Ok(b)) = (d.edge_point(e, 0.49), d.edge_point(e, 0.51)) else { continue };
        let (pa, pb) = (endpoint_to_disk(a), endpoint_to_disk(b));
        let (tx, ty) = (pb.0 - pa.0, pb.1 - pa.1);
        let mid = (0.5 * (pa.0 + pb.0), 0.5 * (pa.1 + pb.1));
        // Holes run clockwise, so the hole interior is on the right.
        out.push((mid.0 + ty * 0.5, mid.1 - tx * 0.5));
    }
    out
}

/// Enumerates the inscribed geodesic polygons of a domain.
pub fn enumerate_polygons(d: &ScherkDomain, limits: &EnumerationLimits) -> Result<Vec<InscribedPolygon>> {
    let n = d.vertex_count();
    if n > limits.max_vertices {
        return Err(Error::CombinatorialLimit(format!(
            "{n} vertices exceed the limit of {}",
            limits.max_vertices
        )));
    }
    let subsets = (1u64 << n) - 1 - n as u64 - (n * n.saturating_sub(1) / 2) as u64;
    if subsets > limits.max_candidates as u64 {
        return Err(Error::CombinatorialLimit(format!(
            "{subsets} candidate vertex subsets exceed the limit of {}",
            limits.max_candidates
        )));
    }
    let rings: Vec<Vec<(f64, f64)>> = (0..d.components.len()).map(|c| d.ring_disk(c, 64)).collect();
    let mut ctx = Context { d, rings, chord_ok: vec![None; n * n], hole_points: hole_points(d), samples: limits.chord_samples };
    let slots: Vec<(usize, usize)> = (0..n).map(|v| {
        let s = d.slot(v);
        (s.component, s.edge_out)
    }).collect();
    let disk: Vec<(f64, f64)> = d.vertices.iter().map(|v| endpoint_to_disk(*v)).collect();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 3 {
            continue;
        }
        let mut verts: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let single = verts.iter().all(|v| slots[*v].0 == slots[verts[0]].0);
        if single {
            verts.sort_by_key(|v| slots[*v].1);
        } else {
            let m = verts.iter().fold((0.0, 0.0), |a, v| (a.0 + disk[*v].0, a.1 + disk[*v].1));
            let c = (m.0 / verts.len() as f64, m.1 / verts.len() as f64);
            verts.sort_by(|a, b| {
                let ta = (disk[*a].1 - c.1).atan2(disk[*a].0 - c.0);
                let tb = (disk[*b].1 - c.1).atan2(disk[*b].0 - c.0);
                ta.total_cmp(&tb)
            });
        }
        if let Some(p) = build_polygon(&mut ctx, &verts, single)? {
            out.push(p);
        }
    }
    Ok(out)
}

fn build_polygon(ctx: &mut Context, verts: &[usize], single: bool) -> Result<Option<InscribedPolygon>> {
    let d = ctx.d;
    let k = verts.len();
    let mut sides = Vec::with_capacity(k);
    for i in 0..k {
        let (u, v) = (verts[i], verts[(i + 1) % k]);
        let kind = match boundary_side(d, u, v) {
            Some(s) => s,
            None => {
                if !ctx.chord_inside(u, v) {
                    return Ok(None);
                }
                SideKind::Chord
            }
        };
        sides.push(Side { from: u, to: v, kind });
    }
    let geos: Vec<Geodesic> = sides
        .iter()
        .map(|s| Geodesic::between(d.vertices[s.from], d.vertices[s.to]))
        .collect::<Result<_>>()?;
    if !single && !is_simple(&geos) {
        return Ok(None);
    }
    if !ctx.hole_points.is_empty() {
        let ring: Vec<(f64, f64)> = geos
            .iter()
            .flat_map(|g| g.sample(32).into_iter().take(32).map(endpoint_to_disk))
            .collect();
        if ctx.hole_points.iter().any(|h| crossing_parity(&ring, *h)) {
            return Ok(None);
        }
    }
    let is_whole_domain = d.components.len() == 1
        && k == d.vertex_count()
        && sides.iter().all(|s| matches!(s.kind, SideKind::Edge { .. }));
    Ok(Some(InscribedPolygon { vertices: verts.to_vec(), sides, is_whole_domain }))
}

/// Whether non-adjacent sides avoid each other.
fn is_simple(geos: &[Geodesic]) -> bool {
    let k = geos.len();
    for i in 0..k {
        for j in i + 1..k {
            if j == i + 1 || (i == 0 && j == k - 1) {
                continue;
            }
            if segments_cross(&geos[i], &geos[j]) {
                return false;
            }
        }
    }
    true
}

fn in_open_range(g: &Geodesic, s: f64) -> bool {
    let a = g.endpoint_coordinate(g.start);
    let b = g.endpoint_coordinate(g.end);
    s > a.min(b) + 1e-12 && s < a.max(b) - 1e-12
}

fn segments_cross(g: &Geodesic, h: &Geodesic) -> bool {
    let p = match (g.line, h.line) {
        (GeodesicLine::Vertical { x: a }, GeodesicLine::Vertical { x: b }) => {
            if (a - b).abs() > 1e-14 {
                return false;
            }
            return overlap(g, h);
        }
        (GeodesicLine::Vertical { x }, GeodesicLine::Circle { center, radius })
        | (GeodesicLine::Circle { center, radius }, GeodesicLine::Vertical { x }) => {
            let y2 = radius * radius - (x - center).powi(2);
            if y2 <= 0.0 {
                return false;
            }
            (x, y2.sqrt())
        }
        (GeodesicLine::Circle { center: c1, radius: r1 }, GeodesicLine::Circle { center: c2, radius: r2 }) => {
            if (c1 - c2).abs() < 1e-14 {
                if (r1 - r2).abs() > 1e-14 {
                    return false;
                }
                return overlap(g, h);
            }
            let x = (r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1) / (2.0 * (c2 - c1));
            let y2 = r1 * r1 - (x - c1).powi(2);
            if y2 <= 0.0 {
                return false;
            }
            (x, y2.sqrt())
        }
    };
    let q = crate::hyperbolic::HPoint::new_unchecked(p.0, p.1);
    in_open_range(g, g.line.coordinate(q)) && in_open_range(h, h.line.coordinate(q))
}

fn overlap(g: &Geodesic, h: &Geodesic) -> bool {
    let (a0, a1) = (g.endpoint_coordinate(g.start), g.endpoint_coordinate(g.end));
    let (b0, b1) = (h.endpoint_coordinate(h.start), h.endpoint_coordinate(h.end));
    a0.min(a1).max(b0.min(b1)) < a0.max(a1).min(b0.max(b1)) - 1e-12
}

/// Whether a polygon has an ideal vertex.
pub fn has_ideal_vertex(d: &ScherkDomain, p: &InscribedPolygon) -> bool {
    p.vertices.iter().any(|v| matches!(d.vertices[*v], Endpoint::Ideal(_)))
}
