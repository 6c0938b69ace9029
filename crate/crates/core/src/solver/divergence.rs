//! Divergence lines: geodesics along which `|∇u|` blows up as the truncation level grows.

use super::grid::NodeKind;
use super::sequence::TruncationSequence;
use crate::domain::{BoundaryTag, EdgeKind, ScherkDomain};
use crate::error::{Error, Result};
use crate::hyperbolic::{GeodesicLine, HPoint};
use serde::Serialize;
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceConfig {
    /// Minimal ratio `W_top / W_prev` for a node to count as diverging.
    pub growth_ratio: f64,
    /// Nodes this many cells from a Dirichlet node are ignored.
    pub boundary_cells: usize,
    /// Smallest cluster kept.
    pub min_nodes: usize,
    /// Snapping and merging distance, in cells.
    pub snap_cells: f64,
    /// A line must have interior nodes this many cells away on both sides of its middle;
    /// otherwise the cluster is a boundary layer along an edge.
    pub side_cells: f64,
}

impl Default for DivergenceConfig {
    fn default() -> Self {
        Self { growth_ratio: 1.5, boundary_cells: 2, min_nodes: 4, snap_cells: 3.0, side_cells: 6.0 }
    }
}

/// A fitted divergence line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceLineCandidate {
    /// Supporting geodesic in the half-plane: `("vertical", x, 0)` or `("circle", center, radius)`.
    pub geodesic: (String, f64, f64),
    /// Chart coordinates of the two ends of the segment inside the domain.
    pub start: (f64, f64),
    pub end: (f64, f64),
    /// Domain vertices the ends were snapped to.
    pub start_vertex: Option<String>,
    pub end_vertex: Option<String>,
    /// Mean growth exponent `d ln W / d ln m` over the last levels.
    pub score: f64,
    /// RMS chart distance of the cluster from the line, weighted by `ln W`.
    pub width: f64,
    /// Max chart distance of the cluster nodes from the line.
    pub residual: f64,
    pub nodes: usize,
    /// Set when an end lies inside a `C` edge rather than at a vertex.
    pub ends_on_c_interior: bool,
}

struct Cluster {
    nodes: Vec<usize>,
}

fn fit(points: &[(f64, f64)]) -> GeodesicLine {
    // Circle centred on the axis: x² + y² = 2 a x - k, linear in (a, k).
    let n = points.len() as f64;
    let (mut sx, mut sxx, mut sz, mut sxz) = (0.0, 0.0, 0.0, 0.0);
    for (x, y) in points {
        let z = x * x + y * y;
        sx += x;
        sxx += x * x;
        sz += z;
        sxz += x * z;
    }
    let mx = sx / n;
    let var = sxx / n - mx * mx;
    let vertical = GeodesicLine::Vertical { x: mx };
    if var <= 1e-24 {
        return vertical;
    }
    let cov = sxz / n - mx * sz / n;
    let a = 0.5 * cov / var;
    let k = 2.0 * a * mx - sz / n;
    let r2 = a * a - k;
    if !(r2 > 0.0) || !a.is_finite() {
        return vertical;
    }
    let circle = GeodesicLine::Circle { center: a, radius: r2.sqrt() };
    let worst = |g: &GeodesicLine| points.iter().map(|(x, y)| g.euclidean_offset(*x, *y)).fold(0.0, f64::max);
    if worst(&circle) <= worst(&vertical) {
        circle
    } else {
        vertical
    }
}

fn describe(g: &GeodesicLine) -> (String, f64, f64) {
    match *g {
        GeodesicLine::Vertical { x } => ("vertical".into(), x, 0.0),
        GeodesicLine::Circle { center, radius } => ("circle".into(), center, radius),
    }
}

struct Context<'a> {
    seq: &'a TruncationSequence,
    d: &'a ScherkDomain,
    cfg: DivergenceConfig,
}

impl Context<'_> {
    fn chart_point(&self, k: usize) -> (f64, f64) {
        self.seq.levels.last().unwrap().solution.grid.position(k)
    }

    fn halfplane(&self, c: (f64, f64)) -> Result<HPoint> {
        self.seq.spec.chart.to_halfplane(c.0, c.1)
    }

    fn to_chart(&self, p: HPoint) -> Result<(f64, f64)> {
        self.seq.spec.chart.from_position(p.x, p.y)
    }

    /// Chart distance from a node to the line.
    fn deviation(&self, g: &GeodesicLine, c: (f64, f64)) -> Result<f64> {
        let p = self.halfplane(c)?;
        let q = self.to_chart(g.closest_point(p.x, p.y))?;
        Ok((q.0 - c.0).hypot(q.1 - c.1))
    }

    fn inside(&self, c: (f64, f64)) -> bool {
        let s = &self.seq.spec;
        let i = ((c.0 - s.x0) / s.hx).round();
        let j = ((c.1 - s.y0) / s.hy).round();
        if i < 0.0 || j < 0.0 || i >= s.nx as f64 || j >= s.ny as f64 {
            return false;
        }
        let grid = &self.seq.levels.last().unwrap().solution.grid;
        grid.kind[s.index(i as usize, j as usize)] == NodeKind::Interior
    }

    /// Walks along the line from coordinate `s0` in direction `dir` until it leaves the mask.
    fn extend(&self, g: &GeodesicLine, s0: f64, dir: f64) -> Result<(f64, f64)> {
        let h = self.seq.spec.h();
        let mut s = s0;
        let mut last = self.to_chart(g.point_at(s))?;
        for _ in 0..100_000 {
            // Step of about a quarter cell in chart units.
            let p = g.point_at(s);
            let here = self.to_chart(p)?;
            let probe = self.to_chart(g.point_at(s + dir * 1e-6))?;
            let rate = (probe.0 - here.0).hypot(probe.1 - here.1) / 1e-6;
            let ds = 0.25 * h / rate.max(1e-12);
            let next_s = s + dir * ds;
            let next = match self.to_chart(g.point_at(next_s)) {
                Ok(c) => c,
                Err(_) => return Ok(last),
            };
            if !self.inside(next) {
                return Ok(next);
            }
            last = next;
            s = next_s;
        }
        Ok(last)
    }

    fn snap(&self, c: (f64, f64)) -> Option<(usize, (f64, f64))> {
        let h = self.seq.spec.h();
        let mut best: Option<(usize, (f64, f64), f64)> = None;
        for (v, e) in self.d.vertices.iter().enumerate() {
            let Some((x, y)) = e.position() else { continue };
            let Ok(q) = self.seq.spec.chart.from_position(x, y) else { continue };
            let dist = (q.0 - c.0).hypot(q.1 - c.1);
            if dist <= self.cfg.snap_cells * h + 1e-9 && best.is_none_or(|b| dist < b.2) {
                best = Some((v, q, dist));
            }
        }
        best.map(|(v, q, _)| (v, q))
    }

    /// Tag of the Dirichlet node nearest to a chart point.
    fn boundary_kind(&self, c: (f64, f64)) -> Option<EdgeKind> {
        let grid = &self.seq.levels.last().unwrap().solution.grid;
        let mut best = (f64::INFINITY, None);
        for k in 0..grid.node_count() {
            if grid.kind[k] != NodeKind::Dirichlet {
                continue;
            }
            let p = grid.position(k);
            let dist = (p.0 - c.0).hypot(p.1 - c.1);
            if dist < best.0 {
                best = (dist, grid.tag[k]);
            }
        }
        match best.1 {
            Some(BoundaryTag::Edge { kind, .. }) => Some(kind),
            _ => None,
        }
    }
}

fn clusters(flags: &[bool], nx: usize, ny: usize) -> Vec<Cluster> {
    let mut seen = vec![false; flags.len()];
    let mut out = Vec::new();
    for start in 0..flags.len() {
        if !flags[start] || seen[start] {
            continue;
        }
        let mut nodes = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(k) = queue.pop_front() {
            nodes.push(k);
            let (i, j) = ((k % nx) as isize, (k / nx) as isize);
            for dj in -1..=1 {
                for di in -1..=1 {
                    let (a, b) = (i + di, j + dj);
                    if a < 0 || b < 0 || a >= nx as isize || b >= ny as isize {
                        continue;
                    }
                    let q = b as usize * nx + a as usize;
                    if flags[q] && !seen[q] {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        nodes.sort_unstable();
        out.push(Cluster { nodes });
    }
    out
}

/// Finds geodesics where the gradient blows up between the top two levels.
pub fn detect_divergence_lines(
    seq: &TruncationSequence,
    d: &ScherkDomain,
    cfg: &DivergenceConfig,
) -> Result<Vec<DivergenceLineCandidate>> {
    let n = seq.levels.len();
    if n < 3 {
        return Err(Error::Misconfiguration("divergence detection needs at least three levels".into()));
    }
    let ctx = Context { seq, d, cfg: *cfg };
    let fields: Vec<Vec<f64>> = (0..n).map(|l| seq.w_field(l)).collect();
    let top = &seq.levels[n - 1].solution.grid;
    let near = top.near_boundary(cfg.boundary_cells);
    let flags: Vec<bool> = (0..top.node_count())
        .map(|k| {
            top.kind[k] == NodeKind::Interior
                && !near[k]
                && seq.levels[n - 2].solution.grid.kind[k] == NodeKind::Interior
                && fields[n - 1][k] > cfg.growth_ratio * fields[n - 2][k]
        })
        .collect();
    let mut groups: Vec<Vec<usize>> = clusters(&flags, seq.spec.nx, seq.spec.ny)
        .into_iter()
        .filter(|c| c.nodes.len() >= cfg.min_nodes)
        .map(|c| c.nodes)
        .collect();
    let h = seq.spec.h();
    // Merge clusters lying along a common geodesic.
    loop {
        let fits: Vec<GeodesicLine> = groups.iter().map(|g| fit_nodes(&ctx, g)).collect::<Result<_>>()?;
        let mut merged = None;
        'outer: for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let on = |g: &GeodesicLine, nodes: &[usize]| -> Result<bool> {
                    for k in nodes {
                        if ctx.deviation(g, ctx.chart_point(*k))? > cfg.snap_cells * h {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                };
                if on(&fits[a], &groups[b])? || on(&fits[b], &groups[a])? {
                    merged = Some((a, b));
                    break 'outer;
                }
            }
        }
        match merged {
            Some((a, b)) => {
                let g = groups.remove(b);
                groups[a].extend(g);
                groups[a].sort_unstable();
            }
            None => break,
        }
    }
    let mut out = Vec::new();
    for nodes in &groups {
        if !two_sided(&ctx, nodes)? {
            continue;
        }
        out.push(candidate(&ctx, nodes, &fields)?);
    }
    out.sort_by_key(|c| std::cmp::Reverse(c.nodes));
    Ok(out)
}

/// Whether the fitted line has interior on both sides at the cluster's middle node.
fn two_sided(ctx: &Context, nodes: &[usize]) -> Result<bool> {
    let g = fit_nodes(ctx, nodes)?;
    let mut along = Vec::with_capacity(nodes.len());
    for k in nodes {
        let p = ctx.halfplane(ctx.chart_point(*k))?;
        along.push((g.coordinate(g.closest_point(p.x, p.y)), *k));
    }
    along.sort_by(|a, b| a.0.total_cmp(&b.0));
    let s = along[along.len() / 2].0;
    let c = ctx.to_chart(g.point_at(s))?;
    let ahead = ctx.to_chart(g.point_at(s + 1e-6))?;
    let (tx, ty) = (ahead.0 - c.0, ahead.1 - c.1);
    let norm = tx.hypot(ty);
    if norm == 0.0 {
        return Ok(false);
    }
    let off = ctx.cfg.side_cells * ctx.seq.spec.h();
    let (nx, ny) = (-ty / norm * off, tx / norm * off);
    Ok(ctx.inside((c.0 + nx, c.1 + ny)) && ctx.inside((c.0 - nx, c.1 - ny)))
}

fn fit_nodes(ctx: &Context, nodes: &[usize]) -> Result<GeodesicLine> {
    let pts: Vec<(f64, f64)> = nodes
        .iter()
        .map(|k| ctx.halfplane(ctx.chart_point(*k)).map(|p| (p.x, p.y)))
        .collect::<Result<_>>()?;
    Ok(fit(&pts))
}

fn candidate(ctx: &Context, nodes: &[usize], fields: &[Vec<f64>]) -> Result<DivergenceLineCandidate> {
    let seq = ctx.seq;
    let n = seq.levels.len();
    let g = fit_nodes(ctx, nodes)?;
    let mut residual: f64 = 0.0;
    let (mut wsum, mut dsum) = (0.0, 0.0);
    let (mut smin, mut smax) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut score = 0.0;
    for k in nodes {
        let c = ctx.chart_point(*k);
        let dev = ctx.deviation(&g, c)?;
        residual = residual.max(dev);
        let w = fields[n - 1][*k].ln();
        wsum += w;
        dsum += w * dev * dev;
        let p = ctx.halfplane(c)?;
        let s = g.coordinate(g.closest_point(p.x, p.y));
        smin = smin.min(s);
        smax = smax.max(s);
        let mut e = 0.0;
        for l in n - 3..n - 1 {
            e += (fields[l + 1][*k] / fields[l][*k]).ln() / (seq.levels[l + 1].level / seq.levels[l].level).ln();
        }
        score += e / 2.0;
    }
    let start = ctx.extend(&g, smin, -1.0)?;
    let end = ctx.extend(&g, smax, 1.0)?;
    let snap_start = ctx.snap(start);
    let snap_end = ctx.snap(end);
    let on_c = |snapped: &Option<(usize, (f64, f64))>, c: (f64, f64)| {
        snapped.is_none() && ctx.boundary_kind(c) == Some(EdgeKind::C)
    };
    let ends_on_c_interior = on_c(&snap_start, start) || on_c(&snap_end, end);
    Ok(DivergenceLineCandidate {
        geodesic: describe(&g),
        start: snap_start.map_or(start, |s| s.1),
        end: snap_end.map_or(end, |s| s.1),
        start_vertex: snap_start.map(|s| ctx.d.names[s.0].clone()),
        end_vertex: snap_end.map(|s| ctx.d.names[s.0].clone()),
        score: score / nodes.len() as f64,
        width: if wsum > 0.0 { (dsum / wsum).sqrt() } else { 0.0 },
        residual,
        nodes: nodes.len(),
        ends_on_c_interior,
    })
}
