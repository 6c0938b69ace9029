//! Converged (or last) iterate of a Dirichlet solve.

use super::energy::AreaFunctional;
use super::grid::{ConformalGrid, NodeKind};
use crate::error::{Error, Result};
use std::io::Write;
use std::sync::Arc;

/// Nodal residual `-∇E / (hx hy) ≈ div(∇u / W)` on interior nodes, zero elsewhere.
pub fn residual(grid: &ConformalGrid, u: &[f64]) -> Vec<f64> {
    let f = AreaFunctional::new(grid);
    let g = f.gradient(u);
    let s = -1.0 / (grid.spec.hx * grid.spec.hy);
    (0..u.len()).map(|k| if grid.kind[k] == NodeKind::Interior { g[k] * s } else { 0.0 }).collect()
}

#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    pub grid: Arc<ConformalGrid>,
    /// Nodal values; `0` on exterior nodes.
    pub u: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub hit_iteration_cap: bool,
    /// Max and RMS of the nodal residual over the unknowns.
    pub residual: f64,
    pub residual_l2: f64,
    pub residual_history: Vec<f64>,
    pub area_history: Vec<f64>,
}

impl DiscreteSolution {
    pub(crate) fn new(
        grid: Arc<ConformalGrid>,
        u: Vec<f64>,
        iterations: usize,
        converged: bool,
        residual_history: Vec<f64>,
        area_history: Vec<f64>,
    ) -> Self {
        let r = residual(&grid, &u);
        let residual = grid.nodes.iter().map(|k| r[*k].abs()).fold(0.0, f64::max);
        let n = grid.nodes.len().max(1) as f64;
        let residual_l2 = (grid.nodes.iter().map(|k| r[*k] * r[*k]).sum::<f64>() / n).sqrt();
        Self {
            grid,
            u,
            iterations,
            converged,
            hit_iteration_cap: false,
            residual,
            residual_l2,
            residual_history,
            area_history,
        }
    }

    fn active(&self, i: isize, j: isize) -> Option<usize> {
        let s = &self.grid.spec;
        if i < 0 || j < 0 || i >= s.nx as isize || j >= s.ny as isize {
            return None;
        }
        let k = s.index(i as usize, j as usize);
        (self.grid.kind[k] != NodeKind::Exterior).then_some(k)
    }

    /// Chart gradient at a node: centred where both neighbours are active, one-sided otherwise.
    pub fn node_gradient(&self, k: usize) -> (f64, f64) {
        let s = &self.grid.spec;
        let (i, j) = ((k % s.nx) as isize, (k / s.nx) as isize);
        let diff = |a: Option<usize>, b: Option<usize>, h: f64| match (a, b) {
            (Some(a), Some(b)) => (self.u[b] - self.u[a]) / (2.0 * h),
            (None, Some(b)) => (self.u[b] - self.u[k]) / h,
            (Some(a), None) => (self.u[k] - self.u[a]) / h,
            (None, None) => 0.0,
        };
        (
            diff(self.active(i - 1, j), self.active(i + 1, j), s.hx),
            diff(self.active(i, j - 1), self.active(i, j + 1), s.hy),
        )
    }

    /// Area element `W = √(1 + |∇u|² / λ²)` at a node.
    pub fn node_w(&self, k: usize) -> f64 {
        let (gx, gy) = self.node_gradient(k);
        let l = self.grid.lambda[k];
        (1.0 + (gx * gx + gy * gy) / (l * l)).sqrt()
    }

    fn cell(&self, x: f64, y: f64) -> Result<([usize; 4], f64, f64)> {
        let s = &self.grid.spec;
        let fx = (x - s.x0) / s.hx;
        let fy = (y - s.y0) / s.hy;
        let outside = || Error::Domain(format!("point ({x}, {y}) is outside the active grid"));
        if !(fx >= 0.0 && fy >= 0.0 && fx <= (s.nx - 1) as f64 && fy <= (s.ny - 1) as f64) {
            return Err(outside());
        }
        let i = (fx.floor() as usize).min(s.nx - 2);
        let j = (fy.floor() as usize).min(s.ny - 2);
        let n = [s.index(i, j), s.index(i + 1, j), s.index(i, j + 1), s.index(i + 1, j + 1)];
        if n.iter().any(|k| self.grid.kind[*k] == NodeKind::Exterior) {
            return Err(outside());
        }
        Ok((n, fx - i as f64, fy - j as f64))
    }

    fn bilinear(n: [usize; 4], tx: f64, ty: f64, f: impl Fn(usize) -> f64) -> f64 {
        (1.0 - ty) * ((1.0 - tx) * f(n[0]) + tx * f(n[1])) + ty * ((1.0 - tx) * f(n[2]) + tx * f(n[3]))
    }

    /// Bilinear interpolant of `u`.
    pub fn interpolate(&self, x: f64, y: f64) -> Result<f64> {
        let (n, tx, ty) = self.cell(x, y)?;
        Ok(Self::bilinear(n, tx, ty, |k| self.u[k]))
    }

    /// Bilinear interpolant of the nodal gradients.
    pub fn gradient_at(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let (n, tx, ty) = self.cell(x, y)?;
        let g: Vec<(f64, f64)> = (0..4).map(|c| self.node_gradient(n[c])).collect();
        let pick = |f: fn(&(f64, f64)) -> f64| {
            (1.0 - ty) * ((1.0 - tx) * f(&g[0]) + tx * f(&g[1])) + ty * ((1.0 - tx) * f(&g[2]) + tx * f(&g[3]))
        };
        Ok((pick(|p| p.0), pick(|p| p.1)))
    }

    pub fn sup_norm(&self) -> f64 {
        (0..self.u.len()).filter(|k| self.grid.kind[*k] != NodeKind::Exterior).map(|k| self.u[k].abs()).fold(0.0, f64::max)
    }

    /// Writes `x,y,u,W` for every active node with 17 significant digits.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        let (a, b) = match self.grid.spec.chart {
            super::grid::Chart::HalfPlane => ("x", "y"),
            super::grid::Chart::Polar(_) => ("phi", "theta"),
        };
        writeln!(w, "{a},{b},u,W")?;
        for k in 0..self.u.len() {
            if self.grid.kind[k] == NodeKind::Exterior {
                continue;
            }
            let (x, y) = self.grid.position(k);
            writeln!(w, "{},{},{},{}", sci(x), sci(y), sci(self.u[k]), sci(self.node_w(k)))?;
        }
        Ok(())
    }
}

/// Formats a double with 17 significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}
