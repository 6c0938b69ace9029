//! Checks of the three flux properties on a sample of curves: zero flux
//! across closed loops, `|F(C)| < |C|` across interior arcs, and `|F(T)| → |T|`
//! next to edges carrying infinite data.

use super::flux::{discrete_flux, flux_exact, ChartCurve, ExactField, FluxResult, Normal};
use super::report::ExperimentReport;
use crate::error::{Error, Result};
use crate::solver::DiscreteSolution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// What the flux is taken of.
pub enum FluxSubject<'a> {
    Exact { field: &'a ExactField<'a>, tolerance: f64 },
    Discrete(&'a DiscreteSolution),
}

impl FluxSubject<'_> {
    pub fn flux(&self, curve: &ChartCurve, normal: Normal) -> Result<FluxResult> {
        match self {
            FluxSubject::Exact { field, tolerance } => flux_exact(field, curve, normal, *tolerance),
            FluxSubject::Discrete(sol) => discrete_flux(sol, curve, normal),
        }
    }
}

/// Parallel probes next to an edge with data `+∞` (`sign = 1`) or `-∞` (`sign = -1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeProbe {
    pub label: String,
    /// Piece of the edge, traversed with the domain on the left.
    pub edge: Vec<(f64, f64)>,
    pub sign: f64,
    /// Chart distances of the probes from the edge.
    pub offsets: Vec<f64>,
}

impl EdgeProbe {
    /// The edge moved `delta` chart units into the domain.
    pub fn probe(&self, delta: f64) -> ChartCurve {
        let n = self.edge.len();
        let points = (0..n)
            .map(|i| {
                let a = self.edge[i.saturating_sub(1)];
                let b = self.edge[(i + 1).min(n - 1)];
                let (tx, ty) = (b.0 - a.0, b.1 - a.1);
                let l = tx.hypot(ty);
                (self.edge[i].0 - delta * ty / l, self.edge[i].1 + delta * tx / l)
            })
            .collect();
        ChartCurve::Polyline { points }
    }
}

/// Curves on which the properties are evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct LemmaSample {
    pub loops: Vec<ChartCurve>,
    pub arcs: Vec<ChartCurve>,
    pub edges: Vec<EdgeProbe>,
}

impl LemmaSample {
    /// `count` random circles and `count` random segments inside the box,
    /// kept at chart distance `margin` from the complement of `inside`.
    pub fn random(
        inside: impl Fn(f64, f64) -> bool,
        bbox: (f64, f64, f64, f64),
        count: usize,
        margin: f64,
        seed: u64,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x0, x1, y0, y1) = bbox;
        let span = (x1 - x0).min(y1 - y0);
        let clear = |x: f64, y: f64| {
            (0..16).all(|k| {
                let a = k as f64 * std::f64::consts::TAU / 16.0;
                inside(x + margin * a.cos(), y + margin * a.sin())
            }) && inside(x, y)
        };
        let mut loops = Vec::new();
        let mut arcs = Vec::new();
        let mut tries = 0;
        while loops.len() < count || arcs.len() < count {
            tries += 1;
            if tries > 100_000 {
                return Err(Error::Misconfiguration("could not place random curves inside the region".into()));
            }
            let c = (rng.random_range(x0..x1), rng.random_range(y0..y1));
            if loops.len() < count {
                let r = rng.random_range(0.05 * span..0.3 * span);
                let ok = (0..64).all(|k| {
                    let a = k as f64 * std::f64::consts::TAU / 64.0;
                    clear(c.0 + r * a.cos(), c.1 + r * a.sin())
                });
                if ok {
                    loops.push(ChartCurve::Circle { center: c, radius: r });
                }
                continue;
            }
            let d = (rng.random_range(x0..x1), rng.random_range(y0..y1));
            let ok = (0..=64).all(|k| {
                let t = k as f64 / 64.0;
                clear(c.0 + t * (d.0 - c.0), c.1 + t * (d.1 - c.1))
            });
            if ok && (d.0 - c.0).hypot(d.1 - c.1) > 0.05 * span {
                arcs.push(ChartCurve::segment(c, d));
            }
        }
        Ok(Self { loops, arcs, edges: Vec::new() })
    }
}

/// Tolerances of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaTolerances {
    /// Bound on `|F|` across closed loops.
    pub loop_flux: f64,
    /// Required `sign · F(T)/|T| ≥ 1 - saturation` at the edges.
    pub saturation: f64,
}

/// Intercept at `δ = 0` of the least-squares line through `(δ, v)`.
pub fn extrapolate_to_zero(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() == 1 {
        return points[0].1;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    my - sxy / sxx * mx
}

const COLUMNS: [&str; 5] = ["flux", "arc_length", "error_estimate", "margin", "offset"];

/// Evaluates the three properties; every curve becomes one report row.
pub fn verify_flux_lemmas(subject: &FluxSubject, sample: &LemmaSample, tol: &LemmaTolerances) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("flux-lemmas", &(sample, tol), &COLUMNS);
    let loops: Vec<FluxResult> =
        sample.loops.par_iter().map(|c| subject.flux(c, Normal::Right)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (i, f) in loops.iter().enumerate() {
        worst = worst.max(f.value.abs());
        report.row(format!("loop{i}"), vec![f.value, f.arc_length, f.error_estimate, tol.loop_flux - f.value.abs(), 0.0]);
    }
    if !loops.is_empty() {
        report.check("closed loops", worst < tol.loop_flux, format!("max |F| = {worst:.3e}, bound {:.3e}", tol.loop_flux));
    }

    let arcs: Vec<FluxResult> =
        sample.arcs.par_iter().map(|c| subject.flux(c, Normal::Right)).collect::<Result<_>>()?;
    let mut tightest = f64::INFINITY;
    for (i, f) in arcs.iter().enumerate() {
        let margin = f.arc_length - f.value.abs() - f.error_estimate;
        tightest = tightest.min(margin);
        report.row(format!("arc{i}"), vec![f.value, f.arc_length, f.error_estimate, margin, 0.0]);
    }
    if !arcs.is_empty() {
        report.check("interior arcs", tightest > 0.0, format!("min(|C| - |F| - err) = {tightest:.3e}"));
    }

    for e in &sample.edges {
        let fluxes: Vec<FluxResult> =
            e.offsets.par_iter().map(|d| subject.flux(&e.probe(*d), Normal::Right)).collect::<Result<_>>()?;
        let mut ratios = Vec::new();
        for (d, f) in e.offsets.iter().zip(&fluxes) {
            let ratio = e.sign * f.value / f.arc_length;
            ratios.push((*d, ratio));
            report.row(format!("{}@{d}", e.label), vec![f.value, f.arc_length, f.error_estimate, ratio - 1.0, *d]);
        }
        let limit = extrapolate_to_zero(&ratios);
        report.row(format!("{}@0", e.label), vec![f64::NAN, f64::NAN, f64::NAN, limit - 1.0, 0.0]);
        report.check(
            &format!("saturation {}", e.label),
            limit >= 1.0 - tol.saturation,
            format!("F/|T| extrapolated to the edge = {limit:.6}, required ≥ {:.6}", 1.0 - tol.saturation),
        );
    }
    Ok(report)
}
