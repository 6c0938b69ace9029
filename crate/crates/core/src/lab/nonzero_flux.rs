//! Flux of a Scherk graph over an annulus with unequal `A` and `B` lengths.
//!
//! The outer boundary is the ideal quadrilateral `∞, -1, 0, a` with kinds
//! `A, B, A, B`, the inner boundary a geodesic square carrying `0`. The flux
//! across any loop around the hole equals `α_1 - β_1 = 2 ln a`.

use super::flux::{discrete_flux, ChartCurve, Normal};
use super::report::ExperimentReport;
use crate::domain::{check, edge_totals, fixtures, VerdictKind};
use crate::error::{Error, Result};
use crate::solver::{run_truncation_sequence, SequenceConfig};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NonzeroFluxConfig {
    /// Fourth ideal vertex of the outer polygon.
    pub a: f64,
    /// Height of the hole's center; its abscissa is `(a - 1)/2`.
    pub hole_center_y: f64,
    pub hole_half_width: f64,
    /// Horocycles at `∞, -1, 0, a` for generation 1.
    pub horocycles: [f64; 4],
    pub h: f64,
    pub levels: Vec<f64>,
    pub generations: Vec<u32>,
    /// Two loops around the hole: circles about its center.
    pub loop_radii: [f64; 2],
    pub loop_samples: usize,
}

impl Default for NonzeroFluxConfig {
    fn default() -> Self {
        Self {
            a: 1.2,
            hole_center_y: 1.0,
            hole_half_width: 0.1,
            horocycles: [2.0, 0.6, 0.6, 0.6],
            h: 1.0 / 32.0,
            levels: vec![8.0, 16.0, 32.0],
            generations: vec![1, 2, 3],
            loop_radii: [0.2, 0.25],
            loop_samples: 2048,
        }
    }
}

impl NonzeroFluxConfig {
    /// The undeformed configuration `a = 1`, where the flux vanishes by symmetry.
    pub fn symmetric() -> Self {
        Self { a: 1.0, ..Self::default() }
    }

    fn center(&self) -> (f64, f64) {
        (0.5 * (self.a - 1.0), self.hole_center_y)
    }

    /// Closed polyline through `loop_samples` points of a circle about the hole.
    pub fn loop_curve(&self, radius: f64) -> ChartCurve {
        let (cx, cy) = self.center();
        let n = self.loop_samples.max(8);
        let points = (0..=n)
            .map(|k| {
                let t = TAU * (k % n) as f64 / n as f64;
                (cx + radius * t.cos(), cy + radius * t.sin())
            })
            .collect();
        ChartCurve::Polyline { points }
    }
}

const COLUMNS: [&str; 9] =
    ["level", "generation", "flux", "flux_outer_loop", "error_estimate", "target", "gap", "iterations", "converged"];

/// Solves the truncated sequence and compares the loop flux with `α_1 - β_1`.
pub fn experiment_nonzero_flux(cfg: &NonzeroFluxConfig) -> Result<ExperimentReport> {
    let d = fixtures::annulus(cfg.a, cfg.center(), cfg.hole_half_width, cfg.horocycles)?;
    let verdict = check(&d)?;
    if verdict.kind != VerdictKind::Satisfied {
        return Err(Error::Misconfiguration(format!(
            "the annulus is {:?} (witness {}); the experiment needs a SATISFIED domain",
            verdict.kind,
            verdict.witness.map_or("none".into(), |w| w.polygon)
        )));
    }
    let (alpha, beta) = edge_totals(&d, 1)?;
    let target = alpha - beta;
    let seq = run_truncation_sequence(
        &d,
        &SequenceConfig { h: cfg.h, levels: cfg.levels.clone(), generations: cfg.generations.clone(), ..Default::default() },
    )?;
    let mut report = ExperimentReport::new("nonzero-flux", cfg, &COLUMNS);
    report.note(format!("alpha_1 = {alpha:.12}, beta_1 = {beta:.12}, target alpha_1 - beta_1 = {target:.12}"));
    let inner = cfg.loop_curve(cfg.loop_radii[0]);
    let outer = cfg.loop_curve(cfg.loop_radii[1]);
    let mut gaps = Vec::new();
    let mut fluxes = Vec::new();
    for l in &seq.levels {
        let f = discrete_flux(&l.solution, &inner, Normal::Right)?;
        let g = discrete_flux(&l.solution, &outer, Normal::Right)?;
        gaps.push(f.value - target);
        fluxes.push((f.value, g.value));
        report.row(
            format!("m{}n{}", l.level, l.generation),
            vec![
                l.level,
                l.generation as f64,
                f.value,
                g.value,
                f.error_estimate,
                target,
                f.value - target,
                l.solution.iterations as f64,
                if l.solution.converged { 1.0 } else { 0.0 },
            ],
        );
    }
    report.check("all levels converged", !seq.flagged, format!("{} levels", seq.levels.len()));
    let n = gaps.len();
    let (last, last_outer) = fluxes[n - 1];
    if target.abs() < 1e-12 {
        report.check("symmetric flux", last.abs() < 10.0 * cfg.h, format!("|F| = {:.3e}, bound 10h = {:.3e}", last.abs(), 10.0 * cfg.h));
        return Ok(report);
    }
    let tail: Vec<f64> = gaps[n.saturating_sub(3)..].iter().map(|g| g.abs()).collect();
    let monotone = tail.len() == 3 && tail.windows(2).all(|w| w[1] < w[0]);
    report.check("gap decreases", monotone, format!("|gap| over the last levels: {tail:.6?}"));
    let bound = (0.05 * target.abs()).max(10.0 * cfg.h);
    let relative = gaps[n - 1].abs() / target.abs();
    report.check(
        "final gap",
        gaps[n - 1].abs() < bound,
        format!("|gap| = {:.6}, relative {relative:.4}, bound {bound:.6}", gaps[n - 1].abs()),
    );
    report.check(
        "loop independence",
        (last - last_outer).abs() < 1e-2 * target.abs(),
        format!("|F(inner) - F(outer)| = {:.3e}, bound {:.3e}", (last - last_outer).abs(), 1e-2 * target.abs()),
    );
    Ok(report)
}
