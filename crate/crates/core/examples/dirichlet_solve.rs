//! Solves the minimal surface equation on [1,2]² with data from the exact
//! barrier graph and measures the error under refinement.

use scherk::exact::Barrier;
use scherk::solver::{solve_dirichlet, Chart, ConformalGrid, SolverOptions};
use std::sync::Arc;

fn main() -> scherk::Result<()> {
    let b = Barrier;
    let mut last = None;
    for n in [16, 32, 64, 128] {
        let h = 1.0 / n as f64;
        let grid = ConformalGrid::rectangle(Chart::HalfPlane, (1.0, 2.0), (1.0, 2.0), h, |x, y| b.value(x, y).unwrap())?;
        let s = solve_dirichlet(Arc::new(grid), &SolverOptions::default(), None)?;
        let err = s
            .grid
            .nodes
            .iter()
            .map(|k| {
                let (x, y) = s.grid.position(*k);
                (s.u[*k] - b.value(x, y).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        let order = last.map(|e: f64| (e / err).log2());
        println!("h = 1/{n}: {} Newton steps, max error {err:.3e}, order {order:.3?}", s.iterations);
        last = Some(err);
    }
    Ok(())
}
