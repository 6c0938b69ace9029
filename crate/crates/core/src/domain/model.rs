use crate::error::{Error, Result};
use crate::hyperbolic::disk::{angle_from_ideal, endpoint_to_disk, ideal_from_angle};
use crate::hyperbolic::{Endpoint, Geodesic, GeodesicLine, HPoint, Horocycle, IdealPoint, Mobius};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Boundary condition carried by an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    /// `+∞` along a geodesic.
    A,
    /// `-∞` along a geodesic.
    B,
    /// Continuous data along a weakly convex arc.
    C,
    /// Continuous data along an arc of the ideal boundary.
    D,
}

/// Piecewise-linear data `(t, value)` with `t ∈ [0, 1]` strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub samples: Vec<(f64, f64)>,
}

impl BoundaryData {
    pub fn constant(v: f64) -> Self {
        Self { samples: vec![(0.0, v), (1.0, v)] }
    }

    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidDomain("boundary data needs at least one sample".into()));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidDomain(format!(
                    "data abscissae must be strictly increasing, found {} after {}",
                    w[1].0, w[0].0
                )));
            }
        }
        if samples.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidDomain("boundary data must be finite".into()));
        }
        Ok(Self { samples })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let s = &self.samples;
        if t <= s[0].0 {
            return s[0].1;
        }
        if t >= s[s.len() - 1].0 {
            return s[s.len() - 1].1;
        }
        let i = s.partition_point(|(x, _)| *x <= t);
        let (t0, v0) = s[i - 1];
        let (t1, v1) = s[i];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    fn reversed(&self) -> Self {
        Self { samples: self.samples.iter().rev().map(|(t, v)| (1.0 - t, *v)).collect() }
    }

    pub fn sup_abs(&self) -> f64 {
        self.samples.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max)
    }
}

/// One boundary edge between two vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub kind: EdgeKind,
    pub from: usize,
    pub to: usize,
    /// Interior points of a curved `C` edge; empty for geodesic edges.
    pub path: Vec<HPoint>,
    pub data: Option<BoundaryData>,
}

impl Edge {
    pub fn new(kind: EdgeKind, from: usize, to: usize) -> Self {
        let data = matches!(kind, EdgeKind::C | EdgeKind::D).then(|| BoundaryData::constant(0.0));
        Self { kind, from, to, path: Vec::new(), data }
    }

    pub fn with_data(mut self, data: BoundaryData) -> Self {
        self.data = Some(data);
        self
    }

    pub fn with_path(mut self, path: Vec<HPoint>) -> Self {
        self.path = path;
        self
    }

    pub fn is_geodesic(&self) -> bool {
        self.kind != EdgeKind::D && self.path.is_empty()
    }

    fn reversed(&self) -> Self {
        Self {
            kind: self.kind,
            from: self.to,
            to: self.from,
            path: self.path.iter().rev().copied().collect(),
            data: self.data.as_ref().map(BoundaryData::reversed),
        }
    }
}

/// A domain of the hyperbolic plane with Jenkins-Serrin boundary data.
///
/// `components[0]` is the outer boundary, oriented counterclockwise in the
/// disk model; the others are holes, oriented clockwise. Each component is
/// a closed cycle of edges. `D` arcs run along the ideal boundary in the
/// counterclockwise direction, so a domain with `D` edges must list its
/// outer boundary counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ScherkDomain {
    pub vertices: Vec<Endpoint>,
    pub names: Vec<String>,
    pub components: Vec<Vec<Edge>>,
    pub horocycles: Vec<Option<Horocycle>>,
}

/// Position of a vertex on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexSlot {
    pub component: usize,
    /// Index of the edge leaving the vertex.
    pub edge_out: usize,
}

impl ScherkDomain {
    /// Checks the structure and normalises orientations.
    pub fn new(
        vertices: Vec<Endpoint>,
        names: Vec<String>,
        components: Vec<Vec<Edge>>,
        horocycles: Vec<Option<Horocycle>>,
    ) -> Result<Self> {
        let nv = vertices.len();
        if names.len() != nv || horocycles.len() != nv {
            return Err(Error::InvalidDomain("names and horocycles must match the vertex list".into()));
        }
        if components.is_empty() {
            return Err(Error::InvalidDomain("the domain has no boundary".into()));
        }
        let mut seen = vec![false; nv];
        for (c, comp) in components.iter().enumerate() {
            if comp.len() < 2 {
                return Err(Error::InvalidDomain(format!("boundary component {c} has fewer than two edges")));
            }
            for (i, e) in comp.iter().enumerate() {
                if e.from >= nv || e.to >= nv {
                    return Err(Error::InvalidDomain(format!("edge {i} of component {c} references a missing vertex")));
                }
                if e.from == e.to {
                    return Err(Error::InvalidDomain(format!("edge {i} of component {c} is a loop")));
                }
                let next = &comp[(i + 1) % comp.len()];
                if e.to != next.from {
                    return Err(Error::InvalidDomain(format!("component {c} is not closed after edge {i}")));
                }
                if seen[e.from] {
                    return Err(Error::InvalidDomain(format!("vertex {} appears twice on the boundary", names[e.from])));
                }
                seen[e.from] = true;
                match e.kind {
                    EdgeKind::D => {
                        if !(vertices[e.from].is_ideal() && vertices[e.to].is_ideal()) {
                            return Err(Error::InvalidDomain(format!("D edge {i} of component {c} needs ideal ends")));
                        }
                        if !e.path.is_empty() {
                            return Err(Error::InvalidDomain("D edges cannot carry a path".into()));
                        }
                    }
                    EdgeKind::A | EdgeKind::B if !e.path.is_empty() => {
                        return Err(Error::InvalidDomain("A and B edges are geodesic and cannot carry a path".into()));
                    }
                    _ => {}
                }
                if matches!(e.kind, EdgeKind::C | EdgeKind::D) && e.data.is_none() {
                    return Err(Error::InvalidDomain(format!("edge {i} of component {c} needs boundary data")));
                }
                if e.kind != EdgeKind::D && vertices[e.from].is_ideal() && vertices[e.to].is_ideal() && vertices[e.from] == vertices[e.to] {
                    return Err(Error::Coincident);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidDomain(format!("vertex {} is not on the boundary", names[i])));
        }
        for (i, h) in horocycles.iter().enumerate() {
            if let Some(h) = h {
                match vertices[i] {
                    Endpoint::Ideal(p) if p.approx_eq(h.center, 1e-12) => {}
                    _ => {
                        return Err(Error::InvalidDomain(format!(
                            "horocycle at {} is not centred at an ideal vertex",
                            names[i]
                        )))
                    }
                }
            }
        }
        let mut d = ScherkDomain { vertices, names, components, horocycles };
        d.normalize_orientation()?;
        Ok(d)
    }

    fn normalize_orientation(&mut self) -> Result<()> {
        let areas: Vec<f64> = (0..self.components.len()).map(|c| self.signed_area_disk(c)).collect();
        let outer = areas
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.components.swap(0, outer);
        let areas: Vec<f64> = (0..self.components.len()).map(|c| self.signed_area_disk(c)).collect();
        for (c, a) in areas.into_iter().enumerate() {
            let want_ccw = c == 0;
            if (a > 0.0) != want_ccw {
                if self.components[c].iter().any(|e| e.kind == EdgeKind::D) {
                    return Err(Error::InvalidDomain("a boundary with D edges must be listed counterclockwise".into()));
                }
                let rev: Vec<Edge> = self.components[c].iter().rev().map(Edge::reversed).collect();
                self.components[c] = rev;
            }
        }
        Ok(())
    }

    fn signed_area_disk(&self, c: usize) -> f64 {
        let ring = self.ring_disk(c, 32);
        let mut a = 0.0;
        for i in 0..ring.len() {
            let (x0, y0) = ring[i];
            let (x1, y1) = ring[(i + 1) % ring.len()];
            a += x0 * y1 - x1 * y0;
        }
        0.5 * a
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Edge)> {
        self.components.iter().enumerate().flat_map(|(c, comp)| comp.iter().enumerate().map(move |(i, e)| (c, i, e)))
    }

    pub fn has_kind(&self, kind: EdgeKind) -> bool {
        self.edges().any(|(_, _, e)| e.kind == kind)
    }

    pub fn has_ideal_vertices(&self) -> bool {
        self.vertices.iter().any(Endpoint::is_ideal)
    }

    pub fn slot(&self, v: usize) -> VertexSlot {
        for (c, comp) in self.components.iter().enumerate() {
            if let Some(i) = comp.iter().position(|e| e.from == v) {
                return VertexSlot { component: c, edge_out: i };
            }
        }
        unreachable!("every vertex is on the boundary")
    }

    /// Edges arriving at and leaving a vertex.
    pub fn incident(&self, v: usize) -> (&Edge, &Edge) {
        let s = self.slot(v);
        let comp = &self.components[s.component];
        (&comp[(s.edge_out + comp.len() - 1) % comp.len()], &comp[s.edge_out])
    }

    /// The geodesic carrying a geodesic edge.
    pub fn edge_geodesic(&self, e: &Edge) -> Result<Geodesic> {
        Geodesic::between(self.vertices[e.from], self.vertices[e.to])
    }

    /// Disk angles `(start, end)` of a `D` arc, with `end > start`.
    fn d_angles(&self, e: &Edge) -> (f64, f64) {
        let a0 = angle_from_ideal(self.vertices[e.from].ideal().unwrap());
        let mut a1 = angle_from_ideal(self.vertices[e.to].ideal().unwrap());
        if a1 <= a0 {
            a1 += TAU;
        }
        (a0, a1)
    }

    /// Whether a `D` arc is a bounded interval of the real line.
    fn d_is_bounded(&self, e: &Edge) -> Option<(f64, f64)> {
        let a = self.vertices[e.from].ideal()?.finite()?;
        let b = self.vertices[e.to].ideal()?.finite()?;
        (b > a).then_some((a, b))
    }

    /// Point of an edge at parameter `t ∈ [0, 1]`. For `D` edges `t` is the
    /// normalised abscissa when the arc is a bounded interval and the
    /// normalised disk angle otherwise.
    pub fn edge_point(&self, e: &Edge, t: f64) -> Result<Endpoint> {
        match e.kind {
            EdgeKind::D => {
                if let Some((a, b)) = self.d_is_bounded(e) {
                    return Ok(Endpoint::Ideal(IdealPoint::Finite(a + t * (b - a))));
                }
                let (s, u) = self.d_angles(e);
                Ok(Endpoint::Ideal(ideal_from_angle(s + t * (u - s))))
            }
            _ if e.path.is_empty() => Ok(self.edge_geodesic(e)?.sample_param(t)),
            _ => Ok(polyline_point(&self.polyline(e), t)),
        }
    }

    /// Parameter of an ideal point on a `D` edge.
    pub fn d_param(&self, e: &Edge, x: f64) -> f64 {
        if let Some((a, b)) = self.d_is_bounded(e) {
            return (x - a) / (b - a);
        }
        let (s, u) = self.d_angles(e);
        let mut phi = angle_from_ideal(IdealPoint::Finite(x));
        while phi < s {
            phi += TAU;
        }
        (phi - s) / (u - s)
    }

    /// Vertices of a curved edge as a polyline in the half-plane.
    pub fn polyline(&self, e: &Edge) -> Vec<Endpoint> {
        let mut pts = vec![self.vertices[e.from]];
        pts.extend(e.path.iter().map(|p| Endpoint::Interior(*p)));
        pts.push(self.vertices[e.to]);
        pts
    }

    /// `n + 1` samples along an edge, ends included.
    pub fn sample_edge(&self, e: &Edge, n: usize) -> Result<Vec<Endpoint>> {
        if !e.path.is_empty() {
            let pts = self.polyline(e);
            let per = n.div_ceil(pts.len() - 1).max(1);
            let mut out = Vec::new();
            for w in pts.windows(2) {
                for k in 0..per {
                    out.push(lerp_endpoint(w[0], w[1], k as f64 / per as f64));
                }
            }
            out.push(*pts.last().unwrap());
            return Ok(out);
        }
        (0..=n).map(|k| self.edge_point(e, k as f64 / n as f64)).collect()
    }

    /// Closed boundary ring of a component in disk coordinates.
    pub fn ring_disk(&self, c: usize, per_edge: usize) -> Vec<(f64, f64)> {
        let mut ring = Vec::new();
        for e in &self.components[c] {
            if let Ok(s) = self.sample_edge(e, per_edge) {
                ring.extend(s[..s.len() - 1].iter().map(|p| endpoint_to_disk(*p)));
            }
        }
        ring
    }

    /// Point-in-domain test by crossing number in the disk model.
    pub fn contains_disk(&self, rings: &[Vec<(f64, f64)>], w: (f64, f64)) -> bool {
        rings.iter().map(|r| crossing_parity(r, w)).fold(false, |a, b| a ^ b)
    }

    /// Image of the domain under an isometry.
    pub fn transformed(&self, m: &Mobius) -> Result<Self> {
        let vertices: Vec<Endpoint> = self.vertices.iter().map(|v| m.apply_endpoint(*v)).collect();
        let horocycles = self
            .horocycles
            .iter()
            .map(|h| h.map(|h| transform_horocycle(&h, m)).transpose())
            .collect::<Result<Vec<_>>>()?;
        let mut components = Vec::new();
        for comp in &self.components {
            let mut out = Vec::new();
            for e in comp {
                let mut e2 = e.clone();
                e2.path = e.path.iter().map(|p| m.apply(*p)).collect();
                out.push(e2);
            }
            components.push(out);
        }
        ScherkDomain::new(vertices, self.names.clone(), components, horocycles)
    }

    /// Same domain with `A` and `B` exchanged.
    pub fn relabeled(&self) -> Self {
        let mut d = self.clone();
        for comp in &mut d.components {
            for e in comp {
                e.kind = match e.kind {
                    EdgeKind::A => EdgeKind::B,
                    EdgeKind::B => EdgeKind::A,
                    k => k,
                };
            }
        }
        d
    }

    /// Horocycle of generation `n` at a vertex.
    pub fn horocycle(&self, v: usize, generation: u32) -> Option<Horocycle> {
        self.horocycles[v].map(|h| h.generation(generation))
    }
}

fn transform_horocycle(h: &Horocycle, m: &Mobius) -> Result<Horocycle> {
    let top = match h.center {
        IdealPoint::Finite(a) => HPoint::new_unchecked(a, h.size),
        IdealPoint::Infinity => HPoint::new_unchecked(0.0, h.size),
    };
    let p = m.apply(top);
    match m.apply_ideal(h.center) {
        IdealPoint::Infinity => Horocycle::new(IdealPoint::Infinity, p.y),
        IdealPoint::Finite(a) => Horocycle::new(IdealPoint::Finite(a), ((p.x - a).powi(2) + p.y * p.y) / p.y),
    }
}

fn lerp_endpoint(a: Endpoint, b: Endpoint, t: f64) -> Endpoint {
    match (a.position(), b.position()) {
        (Some((x0, y0)), Some((x1, y1))) => {
            let (x, y) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            if t == 0.0 {
                a
            } else if y > 0.0 {
                Endpoint::Interior(HPoint::new_unchecked(x, y))
            } else {
                Endpoint::Ideal(IdealPoint::Finite(x))
            }
        }
        _ => a,
    }
}

fn polyline_point(pts: &[Endpoint], t: f64) -> Endpoint {
    let pos: Vec<(f64, f64)> = pts.iter().filter_map(|p| p.position()).collect();
    let lens: Vec<f64> = pos.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).collect();
    let total: f64 = lens.iter().sum();
    let mut target = t.clamp(0.0, 1.0) * total;
    for (i, l) in lens.iter().enumerate() {
        if target <= *l || i == lens.len() - 1 {
            return lerp_endpoint(pts[i], pts[i + 1], if *l > 0.0 { (target / l).min(1.0) } else { 0.0 });
        }
        target -= l;
    }
    pts[0]
}

/// Parameter of a point on a polyline by cumulative Euclidean length.
pub fn polyline_param(pts: &[(f64, f64)], q: (f64, f64)) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    let lens: Vec<f64> = pts.windows(2).map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1)).collect();
    let total: f64 = lens.iter().sum();
    let mut acc = 0.0;
    for (i, w) in pts.windows(2).enumerate() {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let l2 = dx * dx + dy * dy;
        let s = if l2 > 0.0 { (((q.0 - w[0].0) * dx + (q.1 - w[0].1) * dy) / l2).clamp(0.0, 1.0) } else { 0.0 };
        let d = (w[0].0 + s * dx - q.0).hypot(w[0].1 + s * dy - q.1);
        if d < best.0 {
            best = (d, (acc + s * lens[i]) / total);
        }
        acc += lens[i];
    }
    best.1
}

/// Parity of the number of ring edges crossed by a rightward ray from `w`.
pub fn crossing_parity(ring: &[(f64, f64)], w: (f64, f64)) -> bool {
    let mut inside = false;
    let n = ring.len();
    for i in 0..n {
        let (x0, y0) = ring[i];
        let (x1, y1) = ring[(i + 1) % n];
        if (y0 > w.1) != (y1 > w.1) {
            let x = x0 + (w.1 - y0) * (x1 - x0) / (y1 - y0);
            if x > w.0 {
                inside = !inside;
            }
        }
    }
    inside
}

/// Parameter `τ` with `g.sample_param(τ) ≈ p` for a point on the geodesic.
pub fn geodesic_param(g: &Geodesic, p: HPoint) -> f64 {
    match g.line {
        GeodesicLine::Circle { center, radius } => {
            let ang = |e: Endpoint| match e {
                Endpoint::Interior(q) => q.y.atan2(q.x - center),
                Endpoint::Ideal(IdealPoint::Finite(a)) => {
                    if (a - center - radius).abs() < (a - center + radius).abs() {
                        0.0
                    } else {
                        std::f64::consts::PI
                    }
                }
                Endpoint::Ideal(IdealPoint::Infinity) => f64::NAN,
            };
            let (t0, t1) = (ang(g.start), ang(g.end));
            (p.y.atan2(p.x - center) - t0) / (t1 - t0)
        }
        GeodesicLine::Vertical { .. } => {
            // Invert the height reparametrisation by bisection; it is monotone.
            let h = |t: f64| match g.sample_param(t) {
                Endpoint::Interior(q) => q.y,
                Endpoint::Ideal(IdealPoint::Infinity) => f64::INFINITY,
                Endpoint::Ideal(_) => 0.0,
            };
            let increasing = h(0.75) > h(0.25);
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if (h(mid) < p.y) == increasing {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    }
}
