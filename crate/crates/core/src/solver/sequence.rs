//! The ladder of truncated problems `u_m^n` on `Ω_n` with `±m` on `A`/`B` edges.

use super::grid::{Chart, ConformalGrid, GridSpec, NodeKind, PolygonRegion, Region};
use super::energy::AreaFunctional;
use super::newton::{harmonic_guess, solve_dirichlet, SolverOptions};
use super::solution::DiscreteSolution;
use crate::domain::{truncated_boundary, ScherkDomain};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceConfig {
    /// Truncation levels `m`, strictly increasing.
    pub levels: Vec<f64>,
    /// Horocycle generation per level; a single entry applies to all levels.
    pub generations: Vec<u32>,
    pub h: f64,
    pub chart: Chart,
    /// Boundary samples per edge.
    pub per_edge: usize,
    pub options: SolverOptions,
    /// Probe points in chart coordinates.
    pub probes: Vec<(f64, f64)>,
    /// Inward shift of `A` and `B` edges, in cells.
    pub edge_inset: f64,
    /// Interior nodes at least this many cells from the boundary form the compact probe set.
    pub probe_margin: usize,
}

impl Default for SequenceConfig {
    fn default() -> Self {
        Self {
            levels: vec![2.0, 4.0, 8.0, 16.0, 32.0],
            generations: vec![1],
            h: 1.0 / 32.0,
            chart: Chart::HalfPlane,
            per_edge: 256,
            options: SolverOptions::default(),
            probes: Vec::new(),
            probe_margin: 3,
            edge_inset: 0.0,
        }
    }
}

impl SequenceConfig {
    pub fn generation(&self, i: usize) -> u32 {
        if self.generations.len() == 1 {
            self.generations[0]
        } else {
            self.generations[i]
        }
    }

    fn check(&self) -> Result<()> {
        if self.levels.is_empty() || self.levels.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Misconfiguration("truncation levels must be strictly increasing".into()));
        }
        if self.generations.len() != 1 && self.generations.len() != self.levels.len() {
            return Err(Error::Misconfiguration("give one generation or one per level".into()));
        }
        if !(self.h > 0.0) {
            return Err(Error::Misconfiguration("grid spacing must be positive".into()));
        }
        Ok(())
    }
}

/// One rung of the ladder.
#[derive(Debug, Clone)]
pub struct SequenceLevel {
    pub level: f64,
    pub generation: u32,
    pub solution: DiscreteSolution,
    pub failure: Option<String>,
    /// Values at the configured probes (`None` outside the grid).
    pub probe_values: Vec<Option<f64>>,
    pub compact_sup: f64,
    pub compact_inf: f64,
}

#[derive(Debug, Clone)]
pub struct TruncationSequence {
    pub spec: GridSpec,
    pub levels: Vec<SequenceLevel>,
    /// Set when some level did not converge.
    pub flagged: bool,
}

/// Grid covering `Ω_n` for every generation in `gens`.
pub fn covering_spec(d: &ScherkDomain, gens: &[u32], chart: Chart, h: f64, per_edge: usize) -> Result<GridSpec> {
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for g in gens {
        let tb = truncated_boundary(d, 1.0, *g, per_edge)?;
        let r = PolygonRegion::from_boundary(&tb, &chart)?;
        let q = r.bounding_box();
        b = (b.0.min(q.0), b.1.max(q.1), b.2.min(q.2), b.3.max(q.3));
    }
    let (mut y0, mut y1) = (b.2 - h, b.3 + h);
    match chart {
        Chart::HalfPlane => y0 = y0.max(h),
        Chart::Polar(_) => {
            y0 = y0.max(h);
            y1 = y1.min(std::f64::consts::PI - h);
        }
    }
    // Keep cells square and aligned with `y0`.
    let nx = ((b.1 - b.0 + 2.0 * h) / h).ceil() as usize + 1;
    let ny = ((y1 - y0) / h).ceil() as usize + 1;
    let cx = 0.5 * (b.0 + b.1);
    let x0 = cx - 0.5 * (nx - 1) as f64 * h;
    let mut spec = GridSpec { chart, x0, y0, hx: h, hy: h, nx, ny };
    if let Chart::Polar(_) = chart {
        spec.ny = (((std::f64::consts::PI - h - y0) / h).floor() as usize + 1).min(ny);
    }
    Ok(spec)
}

/// The masked grid of `Ω_n` at level `m`.
pub fn truncated_grid(d: &ScherkDomain, spec: GridSpec, m: f64, generation: u32, per_edge: usize) -> Result<ConformalGrid> {
    let tb = truncated_boundary(d, m, generation, per_edge)?;
    let region = PolygonRegion::from_boundary(&tb, &spec.chart)?;
    ConformalGrid::build(spec, &region)
}

fn compact_range(sol: &DiscreteSolution, margin: usize) -> (f64, f64) {
    let near = sol.grid.near_boundary(margin);
    let mut r = (f64::INFINITY, f64::NEG_INFINITY);
    for k in &sol.grid.nodes {
        if !near[*k] {
            r = (r.0.min(sol.u[*k]), r.1.max(sol.u[*k]));
        }
    }
    (r.1, r.0)
}

/// Solves every level in turn, warm-starting each from the previous one.
pub fn run_truncation_sequence(d: &ScherkDomain, cfg: &SequenceConfig) -> Result<TruncationSequence> {
    cfg.check()?;
    let gens: Vec<u32> = (0..cfg.levels.len()).map(|i| cfg.generation(i)).collect();
    let spec = covering_spec(d, &gens, cfg.chart, cfg.h, cfg.per_edge)?;
    let mut masks: BTreeMap<u32, ConformalGrid> = BTreeMap::new();
    let mut levels: Vec<SequenceLevel> = Vec::new();
    let mut flagged = false;
    for (i, m) in cfg.levels.iter().enumerate() {
        let generation = gens[i];
        let tb = truncated_boundary(d, *m, generation, cfg.per_edge)?;
        let region = PolygonRegion::from_boundary_inset(&tb, &cfg.chart, cfg.edge_inset * cfg.h)?;
        let grid = match masks.get(&generation) {
            Some(g) => g.with_boundary(&region),
            None => {
                let g = ConformalGrid::build(spec, &region)?;
                masks.insert(generation, g.clone());
                g
            }
        };
        let warm = levels.last().and_then(|l| {
            if l.generation == generation {
                Some(l.solution.u.clone())
            } else {
                carried_over(&grid, &l.solution)
            }
        });
        let (solution, failure) = match solve_dirichlet(Arc::new(grid), &cfg.options, warm.as_deref()) {
            Ok(s) => (s, None),
            Err(f) => {
                flagged = true;
                (f.last, Some(f.reason))
            }
        };
        let probe_values = cfg.probes.iter().map(|(x, y)| probe(&solution, &region, *x, *y)).collect();
        let (compact_sup, compact_inf) = compact_range(&solution, cfg.probe_margin);
        levels.push(SequenceLevel { level: *m, generation, solution, failure, probe_values, compact_sup, compact_inf });
    }
    Ok(TruncationSequence { spec, levels, flagged })
}

/// Initial guess on a new generation: the previous solution where it was
/// interior, the harmonic extension elsewhere.
fn carried_over(grid: &ConformalGrid, prev: &DiscreteSolution) -> Option<Vec<f64>> {
    let mut u = harmonic_guess(grid, &AreaFunctional::new(grid)).ok()?;
    for k in &grid.nodes {
        if prev.grid.kind[*k] == NodeKind::Interior {
            u[*k] = prev.u[*k];
        }
    }
    Some(u)
}

fn probe(sol: &DiscreteSolution, region: &PolygonRegion, x: f64, y: f64) -> Option<f64> {
    if !region.contains(x, y) {
        return None;
    }
    sol.interpolate(x, y).ok()
}

/// Convergence summary of one probe across the ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeSummary {
    pub probe: (f64, f64),
    pub values: Vec<Option<f64>>,
    /// `|v_{k+1} - v_k|`.
    pub increments: Vec<f64>,
    /// `(v_{k+1} - v_k)/(m_{k+1} - m_k)`.
    pub slopes: Vec<f64>,
}

impl ProbeSummary {
    /// Both increments across the last three levels are below `tol`.
    pub fn is_cauchy(&self, tol: f64) -> bool {
        let n = self.increments.len();
        n >= 2 && self.values.iter().all(Option::is_some) && self.increments[n - 2..].iter().all(|d| *d < tol)
    }

    /// Ratios `|v_k - v_{k-1}| / |v_{k+1} - v_k|` of consecutive increments.
    pub fn contraction(&self) -> Vec<f64> {
        self.increments.windows(2).map(|w| w[0] / w[1]).collect()
    }

    /// Monotone increase with slope at least `min_slope` at every step.
    pub fn drifts_up(&self, min_slope: f64) -> bool {
        !self.slopes.is_empty() && self.slopes.iter().all(|s| *s >= min_slope)
    }

    pub fn drifts_down(&self, min_slope: f64) -> bool {
        !self.slopes.is_empty() && self.slopes.iter().all(|s| -*s >= min_slope)
    }
}

impl TruncationSequence {
    pub fn probe_summaries(&self, probes: &[(f64, f64)]) -> Vec<ProbeSummary> {
        probes
            .iter()
            .enumerate()
            .map(|(p, xy)| {
                let values: Vec<Option<f64>> = self.levels.iter().map(|l| l.probe_values.get(p).copied().flatten()).collect();
                let mut increments = Vec::new();
                let mut slopes = Vec::new();
                for k in 1..values.len() {
                    if let (Some(a), Some(b)) = (values[k - 1], values[k]) {
                        increments.push((b - a).abs());
                        slopes.push((b - a) / (self.levels[k].level - self.levels[k - 1].level));
                    }
                }
                ProbeSummary { probe: *xy, values, increments, slopes }
            })
            .collect()
    }

    /// Nodal `W` of one level on the shared grid (`NaN` off the mask).
    pub fn w_field(&self, level: usize) -> Vec<f64> {
        let s = &self.levels[level].solution;
        (0..s.u.len())
            .map(|k| if s.grid.kind[k] == NodeKind::Exterior { f64::NAN } else { s.node_w(k) })
            .collect()
    }
}
