use proptest::prelude::*;
use scherk::domain::fixtures;
use scherk::exact::Barrier;
use scherk::hyperbolic::PolarChart;
use scherk::lab::nonuniqueness::{beta_schedule, ideal_data};
use scherk::lab::{
    discrete_flux, experiment_nonuniqueness, flux_exact, verify_flux_lemmas, w0_symmetry, ChartCurve, EdgeProbe,
    ExactField, FluxSubject, LemmaSample, LemmaTolerances, Normal, NonuniquenessConfig,
};
use scherk::solver::{run_truncation_sequence, Chart, ConformalGrid, SequenceConfig, SolverOptions};
use std::f64::consts::{E, FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

fn polar() -> Chart {
    Chart::Polar(PolarChart::standard())
}

fn barrier_polar() -> ExactField<'static> {
    ExactField::profile(polar(), |t| Ok(Barrier::profile_derivative(t)))
}

fn barrier_halfplane() -> ExactField<'static> {
    ExactField::halfplane(|x, y| Ok(Barrier.gradient(x, y)))
}

#[test]
fn constant_graph_has_no_flux() {
    let zero = ExactField::halfplane(|_, _| Ok((0.0, 0.0)));
    let f = flux_exact(&zero, &ChartCurve::segment((0.0, 1.0), (2.0, 3.0)), Normal::Right, 1e-12).unwrap();
    assert_eq!(f.value, 0.0);
    let g = ConformalGrid::rectangle(Chart::HalfPlane, (1.0, 2.0), (1.0, 2.0), 1.0 / 16.0, |_, _| 3.0).unwrap();
    let s = scherk::solver::solve_dirichlet(Arc::new(g), &SolverOptions::default(), None).unwrap();
    let d = discrete_flux(&s, &ChartCurve::segment((1.2, 1.3), (1.7, 1.8)), Normal::Left).unwrap();
    assert!(d.value.abs() < 1e-12);
}

#[test]
fn barrier_flux_saturates_at_its_infinite_edge() {
    let theta = FRAC_PI_2 - 1e-4;
    let f = flux_exact(&barrier_polar(), &ChartCurve::segment((0.0, theta), (1.0, theta)), Normal::Left, 1e-12).unwrap();
    assert!((f.arc_length - 1.0 / theta.sin()).abs() < 1e-10);
    assert!((f.value - f.arc_length).abs() < 1e-3);
    assert!(f.value >= 0.999 * f.arc_length);
}

#[test]
fn barrier_flux_is_below_length_inside() {
    let f = flux_exact(&barrier_polar(), &ChartCurve::segment((0.0, FRAC_PI_4), (1.0, FRAC_PI_4)), Normal::Left, 1e-12)
        .unwrap();
    assert!((f.arc_length - 2f64.sqrt()).abs() < 1e-10);
    assert!(f.value.abs() < f.arc_length);
    // On {θ = π/4} the integrand is sin θ f′/√(1 + sin²θ f′²) per dφ/sin θ, i.e. 1 per unit φ.
    assert!((f.value - 1.0).abs() < 1e-9);
}

#[test]
fn exact_lemmas_hold_for_the_barrier() {
    let field = barrier_halfplane();
    let sample = LemmaSample::random(|x, y| x > 0.05 && y > 0.05, (0.1, 3.0, 0.1, 3.0), 10, 0.02, 0).unwrap();
    assert_eq!((sample.loops.len(), sample.arcs.len()), (10, 10));
    let mut sample = sample;
    let polar_field = barrier_polar();
    sample.edges.clear();
    let tol = LemmaTolerances { loop_flux: 1e-9, saturation: 1e-3 };
    let r = verify_flux_lemmas(&FluxSubject::Exact { field: &field, tolerance: 1e-12 }, &sample, &tol).unwrap();
    assert!(r.passed, "{:?}", r.checks);

    let edge = LemmaSample {
        edges: vec![EdgeProbe { label: "infinite".into(), edge: vec![(1.0, FRAC_PI_2), (0.0, FRAC_PI_2)], sign: 1.0, offsets: vec![1e-4, 2e-4, 4e-4] }],
        ..Default::default()
    };
    let r = verify_flux_lemmas(&FluxSubject::Exact { field: &polar_field, tolerance: 1e-12 }, &edge, &tol).unwrap();
    assert!(r.passed, "{:?}", r.checks);
}

fn triangle_top(h: f64) -> scherk::solver::DiscreteSolution {
    let d = fixtures::triangle().unwrap();
    let cfg = SequenceConfig { h, levels: vec![2.0, 4.0, 8.0, 16.0, 32.0], ..Default::default() };
    let seq = run_truncation_sequence(&d, &cfg).unwrap();
    assert!(!seq.flagged);
    seq.levels.last().unwrap().solution.clone()
}

#[test]
fn discrete_loop_flux_decays_with_the_grid() {
    let l = ChartCurve::Circle { center: (0.25, 1.8), radius: 0.1 };
    let f: Vec<f64> = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0]
        .iter()
        .map(|h| discrete_flux(&triangle_top(*h), &l, Normal::Right).unwrap().value.abs())
        .collect();
    assert!(f[1] < f[0] && f[2] < f[1], "{f:?}");
    assert!(f[2] < 4.0 * (1.0f64 / 64.0).powi(2), "{f:?}");
}

#[test]
fn discrete_lemmas_hold_on_the_triangle() {
    let h = 1.0 / 32.0;
    let s = triangle_top(h);
    let d = fixtures::triangle().unwrap();
    let rings: Vec<Vec<(f64, f64)>> = (0..d.components.len()).map(|c| d.ring_disk(c, 256)).collect();
    let inside = |x: f64, y: f64| {
        scherk::hyperbolic::HPoint::new(x, y)
            .map(|p| d.contains_disk(&rings, scherk::hyperbolic::disk::from_halfplane(p)))
            .unwrap_or(false)
    };
    let mut sample = LemmaSample::random(inside, (0.0, 1.0, 1.0, 2.75), 10, 3.0 * h, 0).unwrap();
    sample.edges.push(EdgeProbe {
        label: "A".into(),
        edge: vec![(0.0, 2.4), (0.0, 1.6)],
        sign: 1.0,
        offsets: vec![2.0 * h, 4.0 * h, 6.0 * h],
    });
    let tol = LemmaTolerances { loop_flux: 10.0 * h * h, saturation: 5.0 * h };
    let r = verify_flux_lemmas(&FluxSubject::Discrete(&s), &sample, &tol).unwrap();
    assert!(r.passed, "{:?}", r.checks);
}

#[test]
fn random_samples_are_reproducible() {
    let inside = |x: f64, y: f64| x > 0.0 && y > 0.5;
    let a = LemmaSample::random(inside, (0.0, 2.0, 0.5, 2.0), 5, 0.05, 42).unwrap();
    let b = LemmaSample::random(inside, (0.0, 2.0, 0.5, 2.0), 5, 0.05, 42).unwrap();
    let c = LemmaSample::random(inside, (0.0, 2.0, 0.5, 2.0), 5, 0.05, 43).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn discrete_fluxes_are_bounded_by_length() {
    let s = triangle_top(1.0 / 32.0);
    for (a, b) in [((0.05, 1.5), (0.05, 2.4)), ((0.15, 1.7), (0.4, 2.0)), ((0.1, 2.2), (0.3, 1.8))] {
        let f = discrete_flux(&s, &ChartCurve::segment(a, b), Normal::Right).unwrap();
        assert!(f.value.abs() <= f.arc_length + f.error_estimate, "{f:?}");
        let r = discrete_flux(&s, &ChartCurve::segment(a, b), Normal::Left).unwrap();
        assert_eq!(r.value, -f.value);
    }
}

#[test]
fn strip_schedule_stays_inside_the_rectangle() {
    let alpha = 3.0 * PI / 8.0;
    let b: Vec<f64> = (0..8).map(|k| beta_schedule(alpha, k)).collect();
    assert!(b.iter().all(|x| *x > alpha && *x < FRAC_PI_2));
    assert!(b.windows(2).all(|w| w[1] < w[0]));
    let cfg = NonuniquenessConfig::default();
    let f = ideal_data(&cfg, 2);
    let phi0 = (0.5 * alpha).tan().ln();
    let ll = -2.0 * phi0;
    assert_eq!(f(phi0), 0.0);
    for k in 0..3 {
        let v = f(phi0 + (k as f64 + 0.5) * ll);
        let expected = (if k % 2 == 0 { 1.0 } else { -1.0 }) * (2f64.powi(k) + k as f64 + 1.0);
        assert!((v - expected).abs() < 1e-12, "cell {k}: {v}");
    }
}

#[test]
fn rectangle_solution_has_both_reflection_symmetries() {
    let (_, dphi, dtheta) = w0_symmetry(3.0 * PI / 8.0, 1.0 / 32.0, 16.0).unwrap();
    assert!(dphi < 1e-6 && dtheta < 1e-6, "{dphi:e} {dtheta:e}");
}

#[test]
fn shallow_strip_is_ordered() {
    let cfg = NonuniquenessConfig { depths: vec![1], h: 1.0 / 16.0, theta_cut: 0.5, probe_cells: vec![2.0, 4.0, 6.0], ..Default::default() };
    let r = experiment_nonuniqueness(&cfg).unwrap();
    assert!(r.find_check("depth 1 ordering").is_some_and(|c| c.passed), "{:?}", r.checks);
    assert!(r.column("gap").unwrap()[0] >= 0.0);
}

#[test]
fn bad_strip_configs_are_rejected() {
    for cfg in [
        NonuniquenessConfig { alpha: 0.5, ..Default::default() },
        NonuniquenessConfig { depths: vec![0], ..Default::default() },
        NonuniquenessConfig { depths: vec![9], ..Default::default() },
        NonuniquenessConfig { h: 0.25, ..Default::default() },
        NonuniquenessConfig { h: 1.0 / 16.0, ..Default::default() },
    ] {
        assert!(experiment_nonuniqueness(&cfg).is_err());
    }
}

fn segment() -> impl Strategy<Value = ((f64, f64), (f64, f64))> {
    ((0.1..3.0f64, 0.1..3.0f64), (0.1..3.0f64, 0.1..3.0f64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn exact_flux_is_bounded_and_odd((a, b) in segment()) {
        let field = barrier_halfplane();
        let c = ChartCurve::segment(a, b);
        let f = flux_exact(&field, &c, Normal::Right, 1e-11).unwrap();
        prop_assert!(f.value.abs() <= f.arc_length + f.error_estimate);
        let g = flux_exact(&field, &c, Normal::Left, 1e-11).unwrap();
        prop_assert_eq!(f.value, -g.value);
    }

    #[test]
    fn exact_flux_is_additive((a, b) in segment(), t in 0.1..0.9f64) {
        let field = barrier_halfplane();
        let m = (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
        let whole = flux_exact(&field, &ChartCurve::Polyline { points: vec![a, m, b] }, Normal::Right, 1e-11).unwrap();
        let p = flux_exact(&field, &ChartCurve::segment(a, m), Normal::Right, 1e-11).unwrap();
        let q = flux_exact(&field, &ChartCurve::segment(m, b), Normal::Right, 1e-11).unwrap();
        prop_assert!((whole.value - p.value - q.value).abs() <= whole.error_estimate + p.error_estimate + q.error_estimate + 1e-12);
    }

    #[test]
    fn exact_loops_carry_no_flux(cx in 0.5..3.0f64, cy in 0.5..3.0f64, r in 0.05..0.4f64) {
        let f = flux_exact(&barrier_halfplane(), &ChartCurve::Circle { center: (cx, cy), radius: r }, Normal::Right, 1e-12).unwrap();
        prop_assert!(f.value.abs() < 1e-9, "{:?}", f);
    }
}

#[test]
fn exact_and_polar_fluxes_agree() {
    let seg = ChartCurve::segment((1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()), (E / 2f64.sqrt(), E / 2f64.sqrt()));
    let q = flux_exact(&barrier_halfplane(), &seg, Normal::Left, 1e-12).unwrap();
    let p = flux_exact(&barrier_polar(), &ChartCurve::segment((0.0, FRAC_PI_4), (1.0, FRAC_PI_4)), Normal::Left, 1e-12)
        .unwrap();
    assert!((p.value - q.value).abs() < 1e-9);
}
