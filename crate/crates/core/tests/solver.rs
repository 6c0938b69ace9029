use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scherk::domain::fixtures;
use scherk::exact::{family, Barrier};
use scherk::hyperbolic::PolarChart;
use scherk::solver::{
    detect_divergence_lines, residual, run_truncation_sequence, solve_dirichlet, AreaFunctional, BandedSpd, Chart,
    ConformalGrid, DivergenceConfig, NodeKind, SequenceConfig, SolverOptions,
};
use scherk::Error;
use std::f64::consts::PI;
use std::sync::Arc;

fn barrier_grid(h: f64) -> ConformalGrid {
    let b = Barrier;
    ConformalGrid::rectangle(Chart::HalfPlane, (1.0, 2.0), (1.0, 2.0), h, |x, y| b.value(x, y).unwrap()).unwrap()
}

fn max_interior(grid: &ConformalGrid, f: impl Fn(usize) -> f64) -> f64 {
    grid.nodes.iter().map(|k| f(*k).abs()).fold(0.0, f64::max)
}

#[test]
fn unit_square_grid_counts_and_lambda() {
    let g = barrier_grid(1.0 / 64.0);
    assert_eq!(g.unknown_count(), 63 * 63);
    for k in 0..g.node_count() {
        let (_, y) = g.position(k);
        assert_eq!(g.lambda[k], 1.0 / y);
    }
}

#[test]
fn polar_strip_has_inverse_sine_lambda() {
    let g = ConformalGrid::rectangle(Chart::Polar(PolarChart::standard()), (0.0, 1.0), (0.1, PI - 0.1), 0.05, |_, _| 0.0)
        .unwrap();
    let max = g.lambda.iter().cloned().fold(0.0, f64::max);
    assert!((max - 1.0 / 0.1f64.sin()).abs() < 1e-12);
    for k in 0..g.node_count() {
        let (_, t) = g.position(k);
        assert!((g.lambda[k] - 1.0 / t.sin()).abs() < 1e-12);
    }
}

#[test]
fn grids_keep_off_the_ideal_boundary() {
    let r = ConformalGrid::rectangle(Chart::HalfPlane, (0.0, 1.0), (0.01, 1.0), 0.1, |_, _| 0.0);
    assert!(matches!(r, Err(Error::Grid(_))));
}

#[test]
fn interior_nodes_have_active_neighbours() {
    let s = fixtures::triangle().unwrap();
    let cfg = SequenceConfig { levels: vec![2.0], ..Default::default() };
    let seq = run_truncation_sequence(&s, &cfg).unwrap();
    let g = &seq.levels[0].solution.grid;
    let sp = g.spec;
    for &k in &g.nodes {
        let (i, j) = (k % sp.nx, k / sp.nx);
        for (a, b) in [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)] {
            assert_ne!(g.kind[sp.index(a, b)], NodeKind::Exterior);
        }
        assert!(g.lambda[k].is_finite() && g.lambda[k] > 0.0);
    }
}

#[test]
fn constants_have_zero_residual_and_solve_exactly() {
    let g = ConformalGrid::rectangle(Chart::HalfPlane, (1.0, 2.0), (1.0, 2.0), 1.0 / 16.0, |_, _| 5.0).unwrap();
    let u = vec![5.0; g.node_count()];
    assert!(residual(&g, &u).iter().all(|r| *r == 0.0));
    let s = solve_dirichlet(Arc::new(g), &SolverOptions::default(), None).unwrap();
    assert!(s.converged);
    assert!(s.grid.nodes.iter().all(|k| (s.u[*k] - 5.0).abs() < 1e-12));
}

fn sampled_barrier_residual(h: f64) -> f64 {
    let g = barrier_grid(h);
    let b = Barrier;
    let u: Vec<f64> = (0..g.node_count()).map(|k| {
        let (x, y) = g.position(k);
        b.value(x, y).unwrap()
    }).collect();
    let r = residual(&g, &u);
    max_interior(&g, |k| r[k])
}

#[test]
fn residual_is_second_order_consistent() {
    let r: Vec<f64> = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0].iter().map(|h| sampled_barrier_residual(*h)).collect();
    for w in r.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.4..=4.6).contains(&ratio), "residual ratio {ratio} ({r:?})");
    }
}

#[test]
fn residual_recovers_the_mean_curvature_source() {
    // The constant mean curvature 1/2 profile 1/sin θ has div(∇u/W) = λ² in the polar chart.
    let p = family(0.5, 0.0).unwrap().primary().clone().anchored(PI / 2.0, 1.0).unwrap();
    let err = |h: f64| {
        let g = ConformalGrid::rectangle(Chart::Polar(PolarChart::standard()), (0.0, 1.0), (0.5, 2.5), h, |_, _| 0.0)
            .unwrap();
        let u: Vec<f64> = (0..g.node_count()).map(|k| p.value(g.position(k).1).unwrap()).collect();
        let r = residual(&g, &u);
        max_interior(&g, |k| {
            let l = g.lambda[k];
            r[k] - l * l
        })
    };
    let e: Vec<f64> = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0].iter().map(|h| err(*h)).collect();
    for w in e.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.4..=4.6).contains(&ratio), "ratio {ratio} ({e:?})");
    }
}

fn barrier_error(h: f64) -> f64 {
    let b = Barrier;
    let s = solve_dirichlet(Arc::new(barrier_grid(h)), &SolverOptions::default(), None).unwrap();
    assert!(s.converged);
    max_interior(&s.grid, |k| {
        let (x, y) = s.grid.position(k);
        s.u[k] - b.value(x, y).unwrap()
    })
}

#[test]
fn barrier_solve_converges_at_second_order() {
    let e: Vec<f64> = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0].iter().map(|h| barrier_error(*h)).collect();
    for w in e.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.7..=2.3).contains(&order), "order {order} ({e:?})");
    }
}

#[test]
fn converged_solutions_meet_the_tolerance() {
    let s = solve_dirichlet(Arc::new(barrier_grid(1.0 / 32.0)), &SolverOptions::default(), None).unwrap();
    assert!(s.converged && !s.hit_iteration_cap);
    assert!(s.residual < 1e-10 * (1.0 + s.sup_norm()));
    assert!(s.grid.nodes.iter().all(|k| s.u[*k].is_finite()));
}

#[test]
fn iteration_cap_is_reported() {
    let opts = SolverOptions { tolerance: 1e-10, max_iterations: 0 };
    let g = ConformalGrid::rectangle(Chart::HalfPlane, (1.0, 2.0), (1.0, 2.0), 1.0 / 16.0, |x, _| if x > 1.5 { 50.0 } else { 0.0 })
        .unwrap();
    let f = solve_dirichlet(Arc::new(g), &opts, None).unwrap_err();
    assert!(f.last.hit_iteration_cap && !f.last.converged);
    assert!(matches!(Error::from(f), Error::NonConvergence(_)));
}

#[test]
fn area_never_increases_along_newton_steps() {
    let g = ConformalGrid::rectangle(Chart::HalfPlane, (1.0, 2.0), (1.0, 2.0), 1.0 / 32.0, |x, y| {
        if x < 1.0 + 1e-12 { 20.0 } else { (3.0 * y).sin() }
    })
    .unwrap();
    let s = solve_dirichlet(Arc::new(g), &SolverOptions::default(), None).unwrap();
    assert!(s.area_history.len() > 2);
    for w in s.area_history.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-14), "{} > {}", w[1], w[0]);
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = ConformalGrid::rectangle(Chart::HalfPlane, (1.0, 2.0), (1.0, 2.0), 1.0 / 12.0, |x, y| (x * y).sin() * 3.0).unwrap();
    let f = AreaFunctional::new(&g);
    let u: Vec<f64> = (0..g.node_count())
        .map(|k| if g.kind[k] == NodeKind::Interior { rng.random_range(-2.0..2.0) } else { g.boundary[k] })
        .collect();
    let mut hess = BandedSpd::zeros(g.unknown_count(), f.bandwidth);
    f.hessian(&g, &u, false, &mut hess);
    for _ in 0..5 {
        let v: Vec<f64> = (0..g.unknown_count()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let hv = hess.mul(&v);
        let step = 1e-7 * u.iter().fold(1.0f64, |a, b| a.max(b.abs()));
        let shifted = |t: f64| {
            let mut w = u.clone();
            for (i, k) in g.nodes.iter().enumerate() {
                w[*k] += t * v[i];
            }
            f.gradient(&w)
        };
        let (gp, gm) = (shifted(step), shifted(-step));
        let fd: Vec<f64> = g.nodes.iter().map(|k| (gp[*k] - gm[*k]) / (2.0 * step)).collect();
        let scale = hv.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let err = hv.iter().zip(&fd).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
        assert!(err < 1e-6 * scale, "{err:e} vs {scale:e}");
    }
}

#[test]
fn ordered_data_gives_ordered_solutions() {
    let base = ConformalGrid::rectangle(Chart::HalfPlane, (1.0, 2.0), (1.0, 2.0), 1.0 / 16.0, |_, _| 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..20 {
        let mut lo = base.clone();
        let mut hi = base.clone();
        for k in 0..base.node_count() {
            if base.kind[k] == NodeKind::Dirichlet {
                let f: f64 = rng.random_range(-10.0..10.0);
                lo.boundary[k] = f;
                hi.boundary[k] = f + rng.random_range(0.0..5.0);
            }
        }
        let a = solve_dirichlet(Arc::new(lo), &SolverOptions::default(), None).unwrap();
        let b = solve_dirichlet(Arc::new(hi), &SolverOptions::default(), None).unwrap();
        for k in &base.nodes {
            assert!(a.u[*k] <= b.u[*k] + 1e-12, "node {k}: {} > {}", a.u[*k], b.u[*k]);
        }
    }
}

#[test]
fn triangle_probes_form_a_cauchy_sequence() {
    let d = fixtures::triangle().unwrap();
    let probes = vec![(0.3, 1.7)];
    let cfg = SequenceConfig { probes: probes.clone(), ..Default::default() };
    let seq = run_truncation_sequence(&d, &cfg).unwrap();
    assert!(!seq.flagged);
    let p = &seq.probe_summaries(&probes)[0];
    assert!(p.is_cauchy(1e-3), "{p:?}");
    assert!(p.contraction().iter().all(|c| *c > 2.0), "{:?}", p.contraction());
}

#[test]
fn violating_quadrilateral_probes_drift_linearly() {
    let d = fixtures::quadrilateral().unwrap();
    let probes = vec![(0.5, 1.8)];
    let cfg = SequenceConfig { probes: probes.clone(), ..Default::default() };
    let seq = run_truncation_sequence(&d, &cfg).unwrap();
    let p = &seq.probe_summaries(&probes)[0];
    assert!(p.drifts_up(0.9), "{p:?}");
}

#[test]
fn finite_data_sequences_stop_changing() {
    use scherk::domain::{BoundaryData, Edge, EdgeKind, ScherkDomain};
    use scherk::hyperbolic::{Endpoint, HPoint};
    let pts = [(0.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)];
    let vertices = pts.iter().map(|p| Endpoint::Interior(HPoint::new(p.0, p.1).unwrap())).collect();
    let edges = (0..4)
        .map(|i| Edge::new(EdgeKind::C, i, (i + 1) % 4).with_data(BoundaryData::constant(i as f64 * 0.5)))
        .collect();
    let d = ScherkDomain::new(vertices, (1..=4).map(|i| format!("v{i}")).collect(), vec![edges], vec![None; 4]).unwrap();
    let probes = vec![(0.5, 1.5)];
    let cfg = SequenceConfig { probes: probes.clone(), levels: vec![2.0, 4.0, 8.0], ..Default::default() };
    let seq = run_truncation_sequence(&d, &cfg).unwrap();
    let p = &seq.probe_summaries(&probes)[0];
    assert!(p.increments.iter().all(|d| *d == 0.0), "{p:?}");
}

#[test]
fn levels_must_increase() {
    let d = fixtures::triangle().unwrap();
    let cfg = SequenceConfig { levels: vec![4.0, 2.0], ..Default::default() };
    assert!(matches!(run_truncation_sequence(&d, &cfg), Err(Error::Misconfiguration(_))));
}

#[test]
fn no_divergence_lines_on_a_satisfied_domain() {
    let d = fixtures::triangle().unwrap();
    let seq = run_truncation_sequence(&d, &SequenceConfig::default()).unwrap();
    assert!(detect_divergence_lines(&seq, &d, &DivergenceConfig::default()).unwrap().is_empty());
}

#[test]
fn divergence_detection_needs_three_levels() {
    let d = fixtures::triangle().unwrap();
    let cfg = SequenceConfig { levels: vec![2.0, 4.0], ..Default::default() };
    let seq = run_truncation_sequence(&d, &cfg).unwrap();
    assert!(detect_divergence_lines(&seq, &d, &DivergenceConfig::default()).is_err());
}

#[test]
fn pentagon_diverges_along_the_witness_chord() {
    // The pentagon is moved so that the chord v1 v2 is the line x = 0.
    let d = fixtures::pentagon().unwrap();
    let seq = run_truncation_sequence(&d, &SequenceConfig::default()).unwrap();
    let h = seq.spec.h();
    let lines = detect_divergence_lines(&seq, &d, &DivergenceConfig::default()).unwrap();
    assert_eq!(lines.len(), 1, "{lines:?}");
    let l = &lines[0];
    assert_eq!(l.geodesic.0, "vertical");
    assert!(l.geodesic.1.abs() < 3.0 * h);
    assert!(l.residual < 3.0 * h);
    assert!(!l.ends_on_c_interior);
    let mut ends = [l.start_vertex.clone(), l.end_vertex.clone()];
    ends.sort();
    assert_eq!(ends, [Some("v1".to_string()), Some("v2".to_string())]);
}

#[test]
fn flux_next_to_an_a_edge_saturates() {
    use scherk::lab::{discrete_flux, ChartCurve, Normal};
    let d = fixtures::triangle().unwrap();
    let seq = run_truncation_sequence(&d, &SequenceConfig::default()).unwrap();
    let top = seq.levels.last().unwrap();
    let h = seq.spec.h();
    // The A edge is x = 0 between y = 1 and y = e; probe along the first node column inside it.
    let sp = seq.spec;
    let i = ((0.0 - sp.x0) / sp.hx).round() as usize + 1;
    let (j0, j1) = (((1.2 - sp.y0) / sp.hy).ceil() as usize, ((2.5 - sp.y0) / sp.hy).floor() as usize);
    let c = ChartCurve::segment((sp.x(i), sp.y(j0)), (sp.x(i), sp.y(j1)));
    let f = discrete_flux(&top.solution, &c, Normal::Left).unwrap();
    assert!(f.value.abs() > (1.0 - 5.0 * h) * f.arc_length, "flux {} of {}", f.value, f.arc_length);
    // One cell from the edge the values stay near the limit graph, far below m - 1,
    // but they keep rising with the truncation level.
    for j in j0..=j1 {
        let k = sp.index(i, j);
        for w in seq.levels.windows(2) {
            assert!(w[1].solution.u[k] > w[0].solution.u[k]);
        }
    }
}
