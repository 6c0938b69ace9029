//! Damped Newton iteration on the discrete area functional.

use super::banded::BandedSpd;
use super::energy::AreaFunctional;
use super::grid::{ConformalGrid, NodeKind};
use super::solution::DiscreteSolution;
use crate::error::Error;
use std::sync::Arc;

/// Stopping rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Converged when `max |r| < tolerance · (1 + ‖u‖∞)`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iterations: 200 }
    }
}

/// A solve that stopped early, with the last iterate.
#[derive(Debug, Clone)]
pub struct SolveFailure {
    pub reason: String,
    pub last: DiscreteSolution,
}

impl From<SolveFailure> for Error {
    fn from(f: SolveFailure) -> Self {
        Error::NonConvergence(format!(
            "{} after {} iterations (residual {:.3e})",
            f.reason, f.last.iterations, f.last.residual
        ))
    }
}

fn fill_boundary(grid: &ConformalGrid, u: &mut [f64]) {
    for (k, v) in u.iter_mut().enumerate() {
        match grid.kind[k] {
            NodeKind::Dirichlet => *v = grid.boundary[k],
            NodeKind::Exterior => *v = 0.0,
            NodeKind::Interior => {}
        }
    }
}

fn residual_norm(grid: &ConformalGrid, g: &[f64]) -> f64 {
    let scale = 1.0 / (grid.spec.hx * grid.spec.hy);
    grid.nodes.iter().map(|k| (g[*k] * scale).abs()).fold(0.0, f64::max)
}

fn sup_norm(grid: &ConformalGrid, u: &[f64]) -> f64 {
    grid.nodes.iter().map(|k| u[*k].abs()).fold(0.0, f64::max)
}

/// Discrete harmonic extension of the Dirichlet data.
pub fn harmonic_guess(grid: &ConformalGrid, f: &AreaFunctional) -> Result<Vec<f64>, Error> {
    let mut u = vec![0.0; grid.node_count()];
    fill_boundary(grid, &mut u);
    let mut h = BandedSpd::zeros(grid.unknown_count(), f.bandwidth);
    f.hessian(grid, &u, true, &mut h);
    // The harmonic energy is quadratic, so one Newton step from u is exact.
    let g = f.harmonic_gradient(&u);
    let rhs: Vec<f64> = grid.nodes.iter().map(|k| -g[*k]).collect();
    let chol = h
        .cholesky()
        .map_err(|e| Error::NonConvergence(format!("harmonic system is singular at row {}", e.row)))?;
    let x = chol.solve(&rhs);
    for (i, k) in grid.nodes.iter().enumerate() {
        u[*k] = x[i];
    }
    Ok(u)
}

/// Solves the Dirichlet problem on `grid`, starting from `initial` if given
/// and from the harmonic extension otherwise.
pub fn solve_dirichlet(
    grid: Arc<ConformalGrid>,
    options: &SolverOptions,
    initial: Option<&[f64]>,
) -> Result<DiscreteSolution, SolveFailure> {
    let f = AreaFunctional::new(&grid);
    let mut u = match initial {
        Some(u0) => u0.to_vec(),
        None => match harmonic_guess(&grid, &f) {
            Ok(u) => u,
            Err(e) => {
                let mut u = vec![0.0; grid.node_count()];
                fill_boundary(&grid, &mut u);
                return Err(SolveFailure { reason: e.to_string(), last: DiscreteSolution::new(grid, u, 0, false, vec![], vec![]) });
            }
        },
    };
    fill_boundary(&grid, &mut u);
    let n = grid.unknown_count();
    let mut hess = BandedSpd::zeros(n, f.bandwidth);
    let mut residuals = Vec::new();
    let mut areas = Vec::new();
    let mut energy = f.energy(&u);
    areas.push(energy);
    for it in 0..=options.max_iterations {
        let g = f.gradient(&u);
        let res = residual_norm(&grid, &g);
        residuals.push(res);
        if res < options.tolerance * (1.0 + sup_norm(&grid, &u)) {
            return Ok(DiscreteSolution::new(grid, u, it, true, residuals, areas));
        }
        if it == options.max_iterations {
            break;
        }
        f.hessian(&grid, &u, false, &mut hess);
        let rhs: Vec<f64> = grid.nodes.iter().map(|k| -g[*k]).collect();
        let mut shift = 0.0;
        let d = loop {
            let mut m = hess.clone();
            if shift > 0.0 {
                for i in 0..n {
                    let dii = m.get(i, i);
                    m.add(i, i, shift * dii);
                }
            }
            match m.cholesky() {
                Ok(c) => break c.solve(&rhs),
                Err(_) if shift < 1e6 => shift = if shift == 0.0 { 1e-10 } else { shift * 100.0 },
                Err(e) => {
                    return Err(SolveFailure {
                        reason: format!("Jacobian is singular at row {}", e.row),
                        last: DiscreteSolution::new(grid, u, it, false, residuals, areas),
                    })
                }
            }
        };
        let slope: f64 = rhs.iter().zip(&d).map(|(r, x)| -r * x).sum();
        let mut t = 1.0;
        let mut trial = u.clone();
        let accepted = loop {
            for (i, k) in grid.nodes.iter().enumerate() {
                trial[*k] = u[*k] + t * d[i];
            }
            let e = f.energy(&trial);
            if e <= energy + 1e-4 * t * slope + 10.0 * f64::EPSILON * energy.abs() {
                energy = e;
                break true;
            }
            t *= 0.5;
            if t < 1e-12 {
                break false;
            }
        };
        if !accepted {
            return Err(SolveFailure {
                reason: "line search failed".into(),
                last: DiscreteSolution::new(grid, u, it, false, residuals, areas),
            });
        }
        std::mem::swap(&mut u, &mut trial);
        areas.push(energy);
    }
    let mut last = DiscreteSolution::new(grid, u, options.max_iterations, false, residuals, areas);
    last.hit_iteration_cap = true;
    Err(SolveFailure { reason: "iteration limit reached".into(), last })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Barrier;
    use crate::solver::grid::Chart;

    fn barrier_error(h: f64) -> f64 {
        let b = Barrier;
        let g = ConformalGrid::rectangle(Chart::HalfPlane, (1.0, 2.0), (1.0, 2.0), h, |x, y| b.value(x, y).unwrap()).unwrap();
        let s = solve_dirichlet(Arc::new(g), &SolverOptions::default(), None).unwrap();
        s.grid.nodes.iter().map(|k| {
            let (x, y) = s.grid.position(*k);
            (s.u[*k] - b.value(x, y).unwrap()).abs()
        }).fold(0.0, f64::max)
    }

    #[test]
    fn constant_data_is_exact() {
        let g = ConformalGrid::rectangle(Chart::HalfPlane, (1.0, 2.0), (1.0, 2.0), 0.1, |_, _| 5.0).unwrap();
        let s = solve_dirichlet(Arc::new(g), &SolverOptions::default(), None).unwrap();
        assert!(s.converged);
        assert!(s.grid.nodes.iter().all(|k| (s.u[*k] - 5.0).abs() < 1e-12));
    }

    #[test]
    fn barrier_converges_at_second_order() {
        let e1 = barrier_error(1.0 / 16.0);
        let e2 = barrier_error(1.0 / 32.0);
        let order = (e1 / e2).log2();
        assert!((1.7..2.3).contains(&order), "order {order} ({e1:e}, {e2:e})");
    }
}
