//! Two truncated families with the same boundary data at infinity.
//!
//! In the polar chart about the geodesic `{x = 0}`, the strip of `N` ideal
//! rectangles `R_α` between the geodesics `(p_0, q_0)` and `(p_N, q_N)` is
//! the rectangle `φ ∈ [φ_0, φ_N]`, `θ ∈ (0, π)`. Both families carry the
//! same data `f` on the ideal arcs and `0` on `(p_0, q_0)`; `u_N` is `+∞`
//! and `u'_N` is `-∞` on `(p_N, q_N)`, truncated at a finite level. The
//! report tracks the flux gap across `(p_0, q_0)` between them.

use super::flux::{discrete_flux, ChartCurve, Normal};
use super::report::ExperimentReport;
use super::verify::extrapolate_to_zero;
use crate::error::{Error, Result};
use crate::hyperbolic::PolarChart;
use crate::solver::{solve_dirichlet, Chart, ConformalGrid, DiscreteSolution, FnRegion, GridSpec, SolverOptions};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NonuniquenessConfig {
    pub alpha: f64,
    pub depths: Vec<usize>,
    pub h: f64,
    /// Scale of the level schedule `m_k = m0 · 2^k`.
    pub m0: f64,
    /// Truncation of the `±∞` data on the far geodesic.
    pub top: f64,
    /// The flux segment is `θ ∈ [theta_cut, π - theta_cut]` on `(p_0, q_0)`.
    pub theta_cut: f64,
    /// Probe distances from `(p_0, q_0)`, in cells.
    pub probe_cells: Vec<f64>,
}

impl Default for NonuniquenessConfig {
    fn default() -> Self {
        Self {
            alpha: 3.0 * PI / 8.0,
            depths: vec![1, 2, 4],
            h: 1.0 / 32.0,
            m0: 1.0,
            top: 64.0,
            theta_cut: 0.3,
            probe_cells: vec![4.0, 8.0, 16.0],
        }
    }
}

/// `φ` of the geodesic `(p_0, q_0)` and the translation length `ln L`.
fn strip_geometry(alpha: f64) -> (f64, f64) {
    let phi0 = (0.5 * alpha).tan().ln();
    (phi0, -2.0 * phi0)
}

/// `β_k = α + (π/2 - α)/(k + 2)`.
pub fn beta_schedule(alpha: f64, k: usize) -> f64 {
    alpha + (FRAC_PI_2 - alpha) / (k as f64 + 2.0)
}

/// Boundary data on the ideal arcs as a function of `φ`: piecewise linear,
/// `0` at `p_0`, constant `(-1)^k (m_k + k + 1)` on the arcs `I_k`.
pub fn ideal_data(cfg: &NonuniquenessConfig, depth: usize) -> impl Fn(f64) -> f64 {
    let (phi0, ll) = strip_geometry(cfg.alpha);
    let mut knots = vec![(phi0, 0.0)];
    for k in 0..=depth {
        let half = 1.0 / (0.5 * beta_schedule(cfg.alpha, k)).tan();
        let half = half.ln();
        let center = phi0 + (k as f64 + 0.5) * ll;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let v = sign * (cfg.m0 * 2f64.powi(k as i32) + k as f64 + 1.0);
        knots.push((center - half, v));
        knots.push((center + half, v));
    }
    move |phi: f64| {
        for w in knots.windows(2) {
            if phi <= w[1].0 {
                let t = ((phi - w[0].0) / (w[1].0 - w[0].0)).clamp(0.0, 1.0);
                return w[0].1 + t * (w[1].1 - w[0].1);
            }
        }
        knots[knots.len() - 1].1
    }
}

fn check_config(cfg: &NonuniquenessConfig) -> Result<()> {
    if !(cfg.alpha > FRAC_PI_4 && cfg.alpha < FRAC_PI_2) {
        return Err(Error::Misconfiguration(format!("alpha = {} is not in (π/4, π/2)", cfg.alpha)));
    }
    if cfg.depths.is_empty() || cfg.depths.iter().any(|n| *n == 0 || *n > 8) {
        return Err(Error::Misconfiguration("depths must lie in 1..=8".into()));
    }
    if !(cfg.theta_cut > 0.0 && cfg.theta_cut < FRAC_PI_2) || cfg.probe_cells.is_empty() {
        return Err(Error::Misconfiguration("theta_cut must lie in (0, π/2) and probes must be given".into()));
    }
    if !(cfg.h > 0.0 && cfg.theta_cut >= 2.0 * cfg.h) {
        return Err(Error::Misconfiguration(format!("theta_cut = {} must be at least two cells (2h)", cfg.theta_cut)));
    }
    let (_, ll) = strip_geometry(cfg.alpha);
    if cfg.probe_cells.iter().any(|c| !(*c > 0.0) || c * cfg.h >= ll) {
        return Err(Error::Misconfiguration(format!("probes must stay inside the first cell of width {ll:.4}")));
    }
    Ok(())
}

fn polar() -> Chart {
    Chart::Polar(PolarChart::standard())
}

/// `u_N` (`sign = 1`) or `u'_N` (`sign = -1`).
pub fn solve_strip(cfg: &NonuniquenessConfig, depth: usize, sign: f64) -> std::result::Result<DiscreteSolution, Error> {
    let (phi0, ll) = strip_geometry(cfg.alpha);
    let phin = phi0 + depth as f64 * ll;
    let f = ideal_data(cfg, depth);
    let eps = 1e-9;
    // θ spacing that divides π, so the rows stay one cell off θ = 0 and θ = π.
    let ht = PI / (PI / cfg.h).round();
    let grid = ConformalGrid::rectangle(polar(), (phi0, phin), (ht, PI - ht), ht, |phi, _| {
        if phi <= phi0 + eps {
            0.0
        } else if phi >= phin - eps {
            sign * cfg.top
        } else {
            f(phi)
        }
    })?;
    Ok(solve_dirichlet(Arc::new(grid), &SolverOptions::default(), None)?)
}

/// Outgoing flux across `(p_0, q_0)`, extrapolated from parallel probes.
fn edge_flux(cfg: &NonuniquenessConfig, sol: &DiscreteSolution) -> Result<f64> {
    let (phi0, _) = strip_geometry(cfg.alpha);
    let mut samples = Vec::new();
    for cells in &cfg.probe_cells {
        let delta = cells * sol.grid.spec.hx;
        let c = ChartCurve::segment((phi0 + delta, cfg.theta_cut), (phi0 + delta, PI - cfg.theta_cut));
        samples.push((delta, discrete_flux(sol, &c, Normal::Left)?.value));
    }
    Ok(extrapolate_to_zero(&samples))
}

const COLUMNS: [&str; 6] = ["depth", "flux_u", "flux_u_prime", "gap", "max_u_prime_minus_u", "iterations"];

/// Flux gap `F(u'_N) - F(u_N)` across `(p_0, q_0)` for each depth.
pub fn experiment_nonuniqueness(cfg: &NonuniquenessConfig) -> Result<ExperimentReport> {
    check_config(cfg)?;
    let mut report = ExperimentReport::new("nonuniqueness", cfg, &COLUMNS);
    report.note("evidence at finite depth only; the levels m_k = m0·2^k and β_k = α + (π/2 - α)/(k + 2) are a chosen schedule");
    report.note("u_N decreases and u'_N increases with N by the comparison principle, so the gap cannot grow with N");
    let mut gaps = Vec::new();
    for &depth in &cfg.depths {
        let (u, v) = match (solve_strip(cfg, depth, 1.0), solve_strip(cfg, depth, -1.0)) {
            (Ok(u), Ok(v)) => (u, v),
            (Err(e), _) | (_, Err(e)) => {
                report.check(&format!("depth {depth} solved"), false, e.to_string());
                return Ok(report);
            }
        };
        let fu = edge_flux(cfg, &u)?;
        let fv = edge_flux(cfg, &v)?;
        let order = u.grid.nodes.iter().map(|k| v.u[*k] - u.u[*k]).fold(f64::NEG_INFINITY, f64::max);
        gaps.push(fv - fu);
        report.row(
            format!("N{depth}"),
            vec![depth as f64, fu, fv, fv - fu, order, (u.iterations + v.iterations) as f64],
        );
        report.check(&format!("depth {depth} ordering"), order <= 1e-9, format!("max(u' - u) = {order:.3e}"));
    }
    let positive = gaps.iter().all(|g| *g > 0.0);
    report.check("gap positive", positive, format!("gaps {gaps:.6?}"));
    let nondecreasing = gaps.windows(2).all(|w| w[1] >= w[0]);
    report.check("gap non-decreasing", nondecreasing, format!("gaps {gaps:.6?}"));
    Ok(report)
}

/// Solves `R_α` with data `level` on `(p_0, p_1)`, `(q_0, q_1)` and `0` on the
/// two other sides, and measures the defect of its two reflection symmetries.
pub fn w0_symmetry(alpha: f64, h: f64, level: f64) -> Result<(DiscreteSolution, f64, f64)> {
    let (phi0, _) = strip_geometry(alpha);
    let c = -phi0;
    let sa = alpha.sin();
    // The side (p_0, p_1) is cos θ = sin α cosh φ.
    let floor = move |phi: f64| (sa * phi.cosh()).clamp(-1.0, 1.0).acos();
    let region = FnRegion {
        contains: move |phi: f64, theta: f64| phi.abs() < c && theta > floor(phi) && theta < PI - floor(phi),
        value: move |phi: f64, _| if phi.abs() >= c - 1e-12 { 0.0 } else { level },
    };
    let spec = GridSpec::covering(polar(), -c, c, h, PI - h, h);
    let grid = ConformalGrid::build(spec, &region)?;
    let sol = solve_dirichlet(Arc::new(grid), &SolverOptions::default(), None)?;
    let s = sol.grid.spec;
    let (mut dphi, mut dtheta) = (0.0f64, 0.0f64);
    for k in &sol.grid.nodes {
        let (i, j) = (k % s.nx, k / s.nx);
        dphi = dphi.max((sol.u[*k] - sol.u[s.index(s.nx - 1 - i, j)]).abs());
        dtheta = dtheta.max((sol.u[*k] - sol.u[s.index(i, s.ny - 1 - j)]).abs());
    }
    Ok((sol, dphi, dtheta))
}
