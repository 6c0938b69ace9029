//! Flux `F_u(C) = ∫_C ⟨X_u, ν⟩ ds` of a graph across a curve in a conformal chart.
//!
//! With metric `λ²|dz|²` the integrand reduces to `(∇u · n)/W ds` in chart
//! terms, where `n` is the Euclidean unit normal, `ds` the Euclidean length
//! element and `W = √(1 + |∇u|²/λ²)`.

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::solver::{Chart, DiscreteSolution};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Side of the traversal the normal points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normal {
    /// `(t_y, -t_x)`: the outer normal of a counterclockwise loop.
    Right,
    Left,
}

impl Normal {
    fn sign(self) -> f64 {
        match self {
            Normal::Right => 1.0,
            Normal::Left => -1.0,
        }
    }
}

/// A curve in chart coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChartCurve {
    Polyline { points: Vec<(f64, f64)> },
    /// Counterclockwise circle.
    Circle { center: (f64, f64), radius: f64 },
}

impl ChartCurve {
    pub fn segment(a: (f64, f64), b: (f64, f64)) -> Self {
        ChartCurve::Polyline { points: vec![a, b] }
    }

    pub fn reversed(&self) -> Self {
        match self {
            ChartCurve::Polyline { points } => ChartCurve::Polyline { points: points.iter().rev().copied().collect() },
            ChartCurve::Circle { .. } => panic!("circles are always counterclockwise"),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ChartCurve::Polyline { points } => {
                let p: Vec<String> = points.iter().map(|(x, y)| format!("({x}, {y})")).collect();
                format!("polyline {}", p.join(" "))
            }
            ChartCurve::Circle { center, radius } => format!("circle ({}, {}) r={radius}", center.0, center.1),
        }
    }

    /// Smooth pieces `t ∈ [0, 1] ↦ (point, derivative)`.
    fn pieces(&self) -> Vec<Piece> {
        match self {
            ChartCurve::Polyline { points } => points.windows(2).map(|w| Piece::Segment(w[0], w[1])).collect(),
            ChartCurve::Circle { center, radius } => vec![Piece::Circle(*center, *radius)],
        }
    }

    pub fn euclidean_length(&self) -> f64 {
        self.pieces().iter().map(Piece::euclidean_length).sum()
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Segment((f64, f64), (f64, f64)),
    Circle((f64, f64), f64),
}

impl Piece {
    fn eval(&self, t: f64) -> ((f64, f64), (f64, f64)) {
        match *self {
            Piece::Segment(a, b) => ((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)), (b.0 - a.0, b.1 - a.1)),
            Piece::Circle(c, r) => {
                let (s, co) = (TAU * t).sin_cos();
                ((c.0 + r * co, c.1 + r * s), (-TAU * r * s, TAU * r * co))
            }
        }
    }

    fn euclidean_length(&self) -> f64 {
        match *self {
            Piece::Segment(a, b) => (b.0 - a.0).hypot(b.1 - a.1),
            Piece::Circle(_, r) => TAU * r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxResult {
    pub arc: String,
    pub value: f64,
    /// Hyperbolic length of the arc.
    pub arc_length: f64,
    pub error_estimate: f64,
    pub normal: Normal,
}

/// A graph known through its chart gradient.
pub struct ExactField<'a> {
    pub chart: Chart,
    pub gradient: Box<dyn Fn(f64, f64) -> Result<(f64, f64)> + Sync + 'a>,
}

impl<'a> ExactField<'a> {
    /// Graph in the half-plane chart.
    pub fn halfplane(gradient: impl Fn(f64, f64) -> Result<(f64, f64)> + Sync + 'a) -> Self {
        Self { chart: Chart::HalfPlane, gradient: Box::new(gradient) }
    }

    /// Graph depending on `θ` only in a polar chart, from its derivative `f′`.
    pub fn profile(chart: Chart, derivative: impl Fn(f64) -> Result<f64> + Sync + 'a) -> Self {
        Self { chart, gradient: Box::new(move |_, theta| Ok((0.0, derivative(theta)?))) }
    }

    fn integrand(&self, x: f64, y: f64, d: (f64, f64)) -> Result<f64> {
        let (gx, gy) = (self.gradient)(x, y)?;
        let l = self.chart.lambda(x, y);
        let w = (1.0 + (gx * gx + gy * gy) / (l * l)).sqrt();
        let flux = if w.is_finite() { (gx * d.1 - gy * d.0) / w } else { saturated(gx, gy, l, d) };
        Ok(flux)
    }
}

/// Limit of `(g · n)/W` when `|g|` overflows.
fn saturated(gx: f64, gy: f64, l: f64, d: (f64, f64)) -> f64 {
    let m = gx.abs().max(gy.abs());
    let (ux, uy) = (gx / m, gy / m);
    l * (ux * d.1 - uy * d.0) / ux.hypot(uy)
}

/// Flux of an exact graph by adaptive quadrature to `tol` per piece.
pub fn flux_exact(field: &ExactField, curve: &ChartCurve, normal: Normal, tol: f64) -> Result<FluxResult> {
    let mut value = 0.0;
    let mut length = 0.0;
    let mut error = 0.0;
    let mut failure = None;
    for p in curve.pieces() {
        let q = adaptive_simpson(
            |t| {
                let ((x, y), d) = p.eval(t);
                match field.integrand(x, y, d) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            0.0,
            1.0,
            tol,
        );
        let l = adaptive_simpson(
            |t| {
                let ((x, y), d) = p.eval(t);
                field.chart.lambda(x, y) * d.0.hypot(d.1)
            },
            0.0,
            1.0,
            tol,
        );
        if q.capped || l.capped {
            return Err(Error::NonConvergence(format!("flux quadrature did not reach {tol:e} on {}", curve.describe())));
        }
        value += q.value;
        error += q.error;
        length += l.value;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(FluxResult { arc: curve.describe(), value: normal.sign() * value, arc_length: length, error_estimate: error, normal })
}

/// Midpoint rule over equal arclength intervals of Euclidean length at most `step`.
fn midpoint_flux(sol: &DiscreteSolution, pieces: &[Piece], step: f64) -> Result<(f64, f64)> {
    let chart = sol.grid.spec.chart;
    let lengths: Vec<f64> = pieces.iter().map(Piece::euclidean_length).collect();
    let total: f64 = lengths.iter().sum();
    let n = (total / step).ceil().max(1.0) as usize;
    let ds = total / n as f64;
    let mut value = 0.0;
    let mut length = 0.0;
    let mut piece = 0;
    let mut start = 0.0;
    for i in 0..n {
        let s = (i as f64 + 0.5) * ds;
        while piece + 1 < pieces.len() && s > start + lengths[piece] {
            start += lengths[piece];
            piece += 1;
        }
        if lengths[piece] == 0.0 {
            continue;
        }
        let t = ((s - start) / lengths[piece]).clamp(0.0, 1.0);
        let ((x, y), d) = pieces[piece].eval(t);
        let scale = ds / d.0.hypot(d.1);
        let d = (d.0 * scale, d.1 * scale);
        let (gx, gy) = sol.gradient_at(x, y)?;
        let l = chart.lambda(x, y);
        let w = (1.0 + (gx * gx + gy * gy) / (l * l)).sqrt();
        value += (gx * d.1 - gy * d.0) / w;
        length += l * ds;
    }
    Ok((value, length))
}

/// Midpoint-rule flux of a discrete solution at quarter-cell spacing; the
/// error estimate is the change against half that resolution.
pub fn discrete_flux(sol: &DiscreteSolution, curve: &ChartCurve, normal: Normal) -> Result<FluxResult> {
    let pieces = curve.pieces();
    let h = sol.grid.spec.hx.min(sol.grid.spec.hy);
    let (fine, length) = midpoint_flux(sol, &pieces, 0.25 * h)?;
    let (coarse, _) = midpoint_flux(sol, &pieces, 0.5 * h)?;
    Ok(FluxResult {
        arc: curve.describe(),
        value: normal.sign() * fine,
        arc_length: length,
        error_estimate: (fine - coarse).abs(),
        normal,
    })
}
