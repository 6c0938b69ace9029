//! Flux of the exact barrier graph and of a discrete solution: zero around
//! loops, below length across arcs, saturated at +∞ edges.

use scherk::domain::fixtures;
use scherk::exact::Barrier;
use scherk::lab::{
    discrete_flux, verify_flux_lemmas, ChartCurve, EdgeProbe, ExactField, FluxSubject, LemmaSample, LemmaTolerances,
    Normal,
};
use scherk::solver::{run_truncation_sequence, SequenceConfig};

fn main() -> scherk::Result<()> {
    let field = ExactField::halfplane(|x, y| Ok(Barrier.gradient(x, y)));
    let sample = LemmaSample::random(|x, y| x > 0.05 && y > 0.05, (0.1, 3.0, 0.1, 3.0), 10, 0.02, 0)?;
    let tol = LemmaTolerances { loop_flux: 1e-9, saturation: 1e-3 };
    let r = verify_flux_lemmas(&FluxSubject::Exact { field: &field, tolerance: 1e-12 }, &sample, &tol)?;
    println!("exact barrier:");
    for c in &r.checks {
        println!("  {}: {} ({})", c.name, if c.passed { "ok" } else { "FAILED" }, c.detail);
    }

    let h = 1.0 / 32.0;
    let seq = run_truncation_sequence(&fixtures::triangle()?, &SequenceConfig { h, ..Default::default() })?;
    let sol = &seq.levels.last().unwrap().solution;
    let lp = discrete_flux(sol, &ChartCurve::Circle { center: (0.25, 1.8), radius: 0.1 }, Normal::Right)?;
    println!("triangle, m = {}: loop flux {:.3e}", seq.levels.last().unwrap().level, lp.value);
    let edge = LemmaSample {
        edges: vec![EdgeProbe { label: "A".into(), edge: vec![(0.0, 2.4), (0.0, 1.6)], sign: 1.0, offsets: vec![2.0 * h, 4.0 * h, 6.0 * h] }],
        ..Default::default()
    };
    let r = verify_flux_lemmas(&FluxSubject::Discrete(sol), &edge, &LemmaTolerances { loop_flux: 0.0, saturation: 5.0 * h })?;
    for c in &r.checks {
        println!("  {}: {}", c.name, c.detail);
    }
    Ok(())
}
