//! Discrete area functional of a graph over a masked conformal grid.
//!
//! Each active cell contributes `(hx hy / 4) λ_c Σ √(λ_c² + gx² + gy²)`
//! over its four corners, with `gx`, `gy` the one-sided differences along
//! the cell edges meeting at the corner and `λ_c` the geometric mean of the
//! nodal conformal factors. The functional is convex; its gradient divided
//! by `-hx hy` approximates `div(∇u/W)`.

use super::banded::BandedSpd;
use super::grid::{ConformalGrid, NodeKind};

#[derive(Debug, Clone, Copy)]
struct Cell {
    /// Nodes `00, 10, 01, 11`.
    n: [usize; 4],
    lam: f64,
}

/// Corner stencils: `(x-difference nodes, y-difference nodes)` as indices into `Cell::n`.
const CORNERS: [((usize, usize), (usize, usize)); 4] = [
    ((0, 1), (0, 2)),
    ((0, 1), (1, 3)),
    ((2, 3), (0, 2)),
    ((2, 3), (1, 3)),
];

/// Cached stencil data for a grid.
#[derive(Debug, Clone)]
pub struct AreaFunctional {
    cells: Vec<Cell>,
    hx: f64,
    hy: f64,
    pub bandwidth: usize,
}

impl AreaFunctional {
    pub fn new(g: &ConformalGrid) -> Self {
        let (nx, ny) = (g.spec.nx, g.spec.ny);
        let mut cells = Vec::new();
        let mut bw = 0usize;
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let n = [g.spec.index(i, j), g.spec.index(i + 1, j), g.spec.index(i, j + 1), g.spec.index(i + 1, j + 1)];
                if n.iter().any(|k| g.kind[*k] == NodeKind::Exterior) || !n.iter().any(|k| g.kind[*k] == NodeKind::Interior) {
                    continue;
                }
                let lam = n.iter().map(|k| g.lambda[*k].ln()).sum::<f64>() * 0.25;
                let unk: Vec<usize> = n.iter().map(|k| g.unknown[*k]).filter(|u| *u != usize::MAX).collect();
                for a in &unk {
                    for b in &unk {
                        bw = bw.max(a.abs_diff(*b));
                    }
                }
                cells.push(Cell { n, lam: lam.exp() });
            }
        }
        Self { cells, hx: g.spec.hx, hy: g.spec.hy, bandwidth: bw }
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Hyperbolic area of the graph over the active cells.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let w0 = 0.25 * self.hx * self.hy;
        let mut e = 0.0;
        for c in &self.cells {
            let l2 = c.lam * c.lam;
            let mut s = 0.0;
            for ((a, b), (p, q)) in CORNERS {
                let gx = (u[c.n[b]] - u[c.n[a]]) / self.hx;
                let gy = (u[c.n[q]] - u[c.n[p]]) / self.hy;
                s += (l2 + gx * gx + gy * gy).sqrt();
            }
            e += w0 * c.lam * s;
        }
        e
    }

    /// Gradient of the energy with respect to every node value.
    pub fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let w0 = 0.25 * self.hx * self.hy;
        let mut g = vec![0.0; u.len()];
        for c in &self.cells {
            let l2 = c.lam * c.lam;
            let w = w0 * c.lam;
            for ((a, b), (p, q)) in CORNERS {
                let gx = (u[c.n[b]] - u[c.n[a]]) / self.hx;
                let gy = (u[c.n[q]] - u[c.n[p]]) / self.hy;
                let s = (l2 + gx * gx + gy * gy).sqrt();
                let fx = w * gx / (s * self.hx);
                let fy = w * gy / (s * self.hy);
                g[c.n[b]] += fx;
                g[c.n[a]] -= fx;
                g[c.n[q]] += fy;
                g[c.n[p]] -= fy;
            }
        }
        g
    }

    /// Hessian restricted to the unknowns. With `harmonic` set the
    /// integrand is replaced by `(gx² + gy²)/2` without the `λ` weight.
    pub fn hessian(&self, grid: &ConformalGrid, u: &[f64], harmonic: bool, out: &mut BandedSpd) {
        out.clear();
        let w0 = 0.25 * self.hx * self.hy;
        for c in &self.cells {
            let l2 = c.lam * c.lam;
            let w = w0 * c.lam;
            for ((a, b), (p, q)) in CORNERS {
                let (hxx, hxy, hyy) = if harmonic {
                    (w0, 0.0, w0)
                } else {
                    let gx = (u[c.n[b]] - u[c.n[a]]) / self.hx;
                    let gy = (u[c.n[q]] - u[c.n[p]]) / self.hy;
                    let s = (l2 + gx * gx + gy * gy).sqrt();
                    let s3 = s * s * s;
                    (w * (l2 + gy * gy) / s3, -w * gx * gy / s3, w * (l2 + gx * gx) / s3)
                };
                let dx = [(c.n[b], 1.0 / self.hx), (c.n[a], -1.0 / self.hx)];
                let dy = [(c.n[q], 1.0 / self.hy), (c.n[p], -1.0 / self.hy)];
                for (ni, vi) in dx {
                    let ui = grid.unknown[ni];
                    if ui == usize::MAX {
                        continue;
                    }
                    for (nj, vj) in dx {
                        let uj = grid.unknown[nj];
                        if uj != usize::MAX && uj <= ui {
                            out.add(ui, uj, hxx * vi * vj);
                        }
                    }
                    for (nj, vj) in dy {
                        let uj = grid.unknown[nj];
                        if uj != usize::MAX {
                            // Both orderings of the symmetric cross term land in the lower band.
                            if uj <= ui {
                                out.add(ui, uj, hxy * vi * vj);
                            }
                            if ui <= uj {
                                out.add(uj, ui, hxy * vi * vj);
                            }
                        }
                    }
                }
                for (ni, vi) in dy {
                    let ui = grid.unknown[ni];
                    if ui == usize::MAX {
                        continue;
                    }
                    for (nj, vj) in dy {
                        let uj = grid.unknown[nj];
                        if uj != usize::MAX && uj <= ui {
                            out.add(ui, uj, hyy * vi * vj);
                        }
                    }
                }
            }
        }
    }

    /// Gradient of `Σ (hx hy/4)(gx² + gy²)/2` over the active cells.
    pub fn harmonic_gradient(&self, u: &[f64]) -> Vec<f64> {
        let w = 0.25 * self.hx * self.hy;
        let mut g = vec![0.0; u.len()];
        for c in &self.cells {
            for ((a, b), (p, q)) in CORNERS {
                let gx = (u[c.n[b]] - u[c.n[a]]) / self.hx;
                let gy = (u[c.n[q]] - u[c.n[p]]) / self.hy;
                g[c.n[b]] += w * gx / self.hx;
                g[c.n[a]] -= w * gx / self.hx;
                g[c.n[q]] += w * gy / self.hy;
                g[c.n[p]] -= w * gy / self.hy;
            }
        }
        g
    }
}
