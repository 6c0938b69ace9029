//! Uniform grids in a conformal chart, masked to a region.

use crate::domain::{BoundaryTag, EdgeKind, TruncatedBoundary};
use crate::error::{Error, Result};
use crate::hyperbolic::{HPoint, PolarChart};
use serde::Serialize;

/// A conformal chart with metric `λ²(dx² + dy²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Chart {
    /// Upper half-plane coordinates, `λ = 1/y`.
    HalfPlane,
    /// Polar coordinates `(φ, θ)`, `λ = 1/sin θ`.
    Polar(PolarChart),
}

impl Chart {
    pub fn lambda(&self, _x: f64, y: f64) -> f64 {
        match self {
            Chart::HalfPlane => 1.0 / y,
            Chart::Polar(_) => 1.0 / y.sin(),
        }
    }

    pub fn to_halfplane(&self, x: f64, y: f64) -> Result<HPoint> {
        match self {
            Chart::HalfPlane => HPoint::new(x, y),
            Chart::Polar(c) => c.to_halfplane(x, y),
        }
    }

    /// Chart coordinates of a point of the closed half-plane.
    pub fn from_position(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        match self {
            Chart::HalfPlane => Ok((x, y)),
            Chart::Polar(c) => c.from_position(x, y),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Chart::HalfPlane => "half-plane",
            Chart::Polar(_) => "polar",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Exterior,
    Dirichlet,
    Interior,
}

/// Node layout `x_i = x0 + i hx`, `y_j = y0 + j hy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub chart: Chart,
    pub x0: f64,
    pub y0: f64,
    pub hx: f64,
    pub hy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Square cells of size close to `h` covering `[x0, x1] × [y0, y1]`.
    pub fn covering(chart: Chart, x0: f64, x1: f64, y0: f64, y1: f64, h: f64) -> Self {
        let nx = ((x1 - x0) / h).round().max(2.0) as usize + 1;
        let ny = ((y1 - y0) / h).round().max(2.0) as usize + 1;
        GridSpec { chart, x0, y0, hx: (x1 - x0) / (nx - 1) as f64, hy: (y1 - y0) / (ny - 1) as f64, nx, ny }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn h(&self) -> f64 {
        self.hx.max(self.hy)
    }
}

/// A region in chart coordinates with Dirichlet data on its boundary.
pub trait Region {
    /// Whether `(x, y)` lies strictly inside.
    fn contains(&self, x: f64, y: f64) -> bool;

    /// Membership of a row of points at height `y`.
    fn inside_row(&self, y: f64, xs: &[f64]) -> Vec<bool> {
        xs.iter().map(|x| self.contains(*x, y)).collect()
    }

    /// Boundary value assigned to a Dirichlet node at `(x, y)`.
    fn boundary_value(&self, x: f64, y: f64) -> (f64, Option<BoundaryTag>);
}

/// A region given by closures.
pub struct FnRegion<C, V> {
    pub contains: C,
    pub value: V,
}

impl<C, V> Region for FnRegion<C, V>
where
    C: Fn(f64, f64) -> bool,
    V: Fn(f64, f64) -> f64,
{
    fn contains(&self, x: f64, y: f64) -> bool {
        (self.contains)(x, y)
    }

    fn boundary_value(&self, x: f64, y: f64) -> (f64, Option<BoundaryTag>) {
        ((self.value)(x, y), None)
    }
}

#[derive(Debug, Clone, Copy)]
struct Vertex {
    x: f64,
    y: f64,
    value: f64,
    tag: BoundaryTag,
}

/// Polygonal region in chart coordinates with piecewise-linear data.
#[derive(Debug, Clone)]
pub struct PolygonRegion {
    rings: Vec<Vec<Vertex>>,
}

impl PolygonRegion {
    /// Maps a truncated boundary into the chart.
    pub fn from_boundary(b: &TruncatedBoundary, chart: &Chart) -> Result<Self> {
        Self::from_boundary_inset(b, chart, 0.0)
    }

    /// As [`PolygonRegion::from_boundary`], with samples on `A` and `B`
    /// edges moved `inset` chart units into the region.
    pub fn from_boundary_inset(b: &TruncatedBoundary, chart: &Chart, inset: f64) -> Result<Self> {
        let mut rings = b
            .rings
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        let (x, y) = chart.from_position(s.x, s.y)?;
                        Ok(Vertex { x, y, value: s.value, tag: s.tag })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if inset > 0.0 {
            for ring in &mut rings {
                let n = ring.len();
                let moved: Vec<(f64, f64)> = (0..n)
                    .map(|i| {
                        let v = ring[i];
                        if !matches!(v.tag.kind(), Some(EdgeKind::A | EdgeKind::B)) {
                            return (v.x, v.y);
                        }
                        let (p, q) = (ring[(i + n - 1) % n], ring[(i + 1) % n]);
                        let (tx, ty) = (q.x - p.x, q.y - p.y);
                        let l = tx.hypot(ty);
                        // Rings run with the region on their left.
                        (v.x - inset * ty / l, v.y + inset * tx / l)
                    })
                    .collect();
                for (v, (x, y)) in ring.iter_mut().zip(moved) {
                    v.x = x;
                    v.y = y;
                }
            }
        }
        Ok(Self { rings })
    }

    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for v in self.rings.iter().flatten() {
            b = (b.0.min(v.x), b.1.max(v.x), b.2.min(v.y), b.3.max(v.y));
        }
        b
    }

    fn segments(&self) -> impl Iterator<Item = (&Vertex, &Vertex)> {
        self.rings.iter().flat_map(|r| (0..r.len()).map(move |i| (&r[i], &r[(i + 1) % r.len()])))
    }

    /// Nearest boundary point with its interpolated value and tag.
    pub fn nearest(&self, x: f64, y: f64) -> (f64, f64, BoundaryTag) {
        let mut best = (f64::INFINITY, 0.0, BoundaryTag::Cap { vertex: usize::MAX });
        for (a, b) in self.segments() {
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let l2 = dx * dx + dy * dy;
            let t = if l2 > 0.0 { (((x - a.x) * dx + (y - a.y) * dy) / l2).clamp(0.0, 1.0) } else { 0.0 };
            let d = (a.x + t * dx - x).hypot(a.y + t * dy - y);
            if d < best.0 {
                let value = if a.tag == b.tag {
                    a.value + t * (b.value - a.value)
                } else if t < 0.5 {
                    a.value
                } else {
                    b.value
                };
                let tag = if t < 0.5 { a.tag } else { b.tag };
                best = (d, value, tag);
            }
        }
        best
    }
}

impl Region for PolygonRegion {
    fn contains(&self, x: f64, y: f64) -> bool {
        self.inside_row(y, &[x])[0]
    }

    fn inside_row(&self, y: f64, xs: &[f64]) -> Vec<bool> {
        let mut crossings: Vec<f64> = self
            .segments()
            .filter(|(a, b)| (a.y > y) != (b.y > y))
            .map(|(a, b)| a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y))
            .collect();
        crossings.sort_by(f64::total_cmp);
        // Points on the boundary itself are not strictly inside.
        xs.iter()
            .map(|x| {
                let k = crossings.partition_point(|c| c < x);
                let tol = 1e-9 * (1.0 + x.abs());
                let on = crossings.get(k).is_some_and(|c| c - x <= tol) || k > 0 && x - crossings[k - 1] <= tol;
                k % 2 == 1 && !on
            })
            .collect()
    }

    fn boundary_value(&self, x: f64, y: f64) -> (f64, Option<BoundaryTag>) {
        let (_, v, tag) = self.nearest(x, y);
        (v, Some(tag))
    }
}

/// A masked grid with Dirichlet data and the unknown ordering.
#[derive(Debug, Clone)]
pub struct ConformalGrid {
    pub spec: GridSpec,
    pub kind: Vec<NodeKind>,
    /// Dirichlet values; `NaN` elsewhere.
    pub boundary: Vec<f64>,
    pub tag: Vec<Option<BoundaryTag>>,
    pub lambda: Vec<f64>,
    /// Unknown index of each interior node, `usize::MAX` otherwise.
    pub unknown: Vec<usize>,
    /// Node of each unknown.
    pub nodes: Vec<usize>,
    pub diagnostics: Vec<String>,
}

impl ConformalGrid {
    /// Masks `spec` to `region`. Interior nodes lie strictly inside the
    /// region and off the frame; every other node touching an interior
    /// node (including diagonally) becomes a Dirichlet node.
    pub fn build(spec: GridSpec, region: &dyn Region) -> Result<Self> {
        let (nx, ny) = (spec.nx, spec.ny);
        if nx < 3 || ny < 3 {
            return Err(Error::Grid("grid needs at least 3 × 3 nodes".into()));
        }
        let y_top = spec.y(ny - 1);
        match spec.chart {
            Chart::HalfPlane if spec.y0 < spec.hy * (1.0 - 1e-9) => {
                return Err(Error::Grid(format!("lowest row y = {} is below the standoff h = {}", spec.y0, spec.hy)));
            }
            Chart::Polar(_) if spec.y0 < spec.hy * (1.0 - 1e-9) || y_top > std::f64::consts::PI - spec.hy * (1.0 - 1e-9) => {
                return Err(Error::Grid("polar grid must keep one cell away from θ = 0 and θ = π".into()));
            }
            _ => {}
        }
        let n = nx * ny;
        let xs: Vec<f64> = (0..nx).map(|i| spec.x(i)).collect();
        let mut kind = vec![NodeKind::Exterior; n];
        for j in 1..ny - 1 {
            let row = region.inside_row(spec.y(j), &xs);
            for i in 1..nx - 1 {
                if row[i] {
                    kind[spec.index(i, j)] = NodeKind::Interior;
                }
            }
        }
        let mut boundary = vec![f64::NAN; n];
        let mut tag = vec![None; n];
        for j in 0..ny {
            for i in 0..nx {
                let k = spec.index(i, j);
                if kind[k] == NodeKind::Interior {
                    continue;
                }
                let touches = (j.saturating_sub(1)..=(j + 1).min(ny - 1)).any(|jj| {
                    (i.saturating_sub(1)..=(i + 1).min(nx - 1)).any(|ii| kind[spec.index(ii, jj)] == NodeKind::Interior)
                });
                if touches {
                    kind[k] = NodeKind::Dirichlet;
                    let (v, t) = region.boundary_value(spec.x(i), spec.y(j));
                    boundary[k] = v;
                    tag[k] = t;
                }
            }
        }
        let interior = kind.iter().filter(|k| **k == NodeKind::Interior).count();
        if interior == 0 {
            return Err(Error::Grid("the region contains no interior node".into()));
        }
        let lambda = (0..n).map(|k| spec.chart.lambda(spec.x(k % nx), spec.y(k / nx))).collect();
        let mut g = ConformalGrid {
            spec,
            kind,
            boundary,
            tag,
            lambda,
            unknown: vec![usize::MAX; n],
            nodes: Vec::with_capacity(interior),
            diagnostics: Vec::new(),
        };
        g.order_unknowns();
        g.diagnose_thin_features();
        Ok(g)
    }

    /// Rectangle `[x0, x1] × [y0, y1]` with data from `f` on its frame.
    pub fn rectangle(chart: Chart, x: (f64, f64), y: (f64, f64), h: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let spec = GridSpec::covering(chart, x.0, x.1, y.0, y.1, h);
        let region = FnRegion { contains: |_: f64, _: f64| true, value: f };
        Self::build(spec, &region)
    }

    fn order_unknowns(&mut self) {
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        let by_rows = nx <= ny;
        let (outer, inner) = if by_rows { (ny, nx) } else { (nx, ny) };
        for a in 0..outer {
            for b in 0..inner {
                let k = if by_rows { self.spec.index(b, a) } else { self.spec.index(a, b) };
                if self.kind[k] == NodeKind::Interior {
                    self.unknown[k] = self.nodes.len();
                    self.nodes.push(k);
                }
            }
        }
    }

    fn diagnose_thin_features(&mut self) {
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        let mut thin = 0usize;
        for j in 0..ny {
            let mut run = 0;
            for i in 0..=nx {
                if i < nx && self.kind[self.spec.index(i, j)] == NodeKind::Interior {
                    run += 1;
                } else {
                    if run > 0 && run < 3 {
                        thin += 1;
                    }
                    run = 0;
                }
            }
        }
        if thin > 0 {
            self.diagnostics.push(format!("{thin} grid rows cross the region in fewer than 3 cells"));
        }
    }

    pub fn node_count(&self) -> usize {
        self.kind.len()
    }

    pub fn unknown_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn position(&self, k: usize) -> (f64, f64) {
        (self.spec.x(k % self.spec.nx), self.spec.y(k / self.spec.nx))
    }

    /// Same mask with new Dirichlet values from a region.
    pub fn with_boundary(&self, region: &dyn Region) -> Self {
        let mut g = self.clone();
        for k in 0..g.kind.len() {
            if g.kind[k] == NodeKind::Dirichlet {
                let (x, y) = g.position(k);
                let (v, t) = region.boundary_value(x, y);
                g.boundary[k] = v;
                g.tag[k] = t;
            }
        }
        g
    }

    /// Nodes within `cells` grid steps (Chebyshev distance) of a Dirichlet node.
    pub fn near_boundary(&self, cells: usize) -> Vec<bool> {
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        let mut near = vec![false; nx * ny];
        for k in 0..nx * ny {
            if self.kind[k] != NodeKind::Dirichlet {
                continue;
            }
            let (i, j) = (k % nx, k / nx);
            for jj in j.saturating_sub(cells)..=(j + cells).min(ny - 1) {
                for ii in i.saturating_sub(cells)..=(i + cells).min(nx - 1) {
                    near[self.spec.index(ii, jj)] = true;
                }
            }
        }
        near
    }
}
