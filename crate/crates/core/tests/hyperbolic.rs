use proptest::prelude::*;
use scherk::hyperbolic::length::arc_length;
use scherk::hyperbolic::{
    distance, equidistant_distance, truncated_side_length, Endpoint, Geodesic, GeodesicLine, HPoint, Horocycle,
    IdealPoint, Mobius, PolarChart,
};
use scherk::quadrature::adaptive_simpson;
use scherk::Error;
use std::f64::consts::{E, FRAC_PI_2, FRAC_PI_4, PI};

fn pt(x: f64, y: f64) -> HPoint {
    HPoint::new(x, y).unwrap()
}

fn ideal(a: f64) -> Endpoint {
    Endpoint::Ideal(IdealPoint::Finite(a))
}

const INF: Endpoint = Endpoint::Ideal(IdealPoint::Infinity);

fn on_line(line: &GeodesicLine, p: HPoint) -> f64 {
    match *line {
        GeodesicLine::Vertical { x } => (p.x - x).abs(),
        GeodesicLine::Circle { center, radius } => ((p.x - center).hypot(p.y) - radius).abs(),
    }
}

#[test]
fn points_need_positive_height() {
    assert!(HPoint::new(0.0, 0.0).is_err());
    assert!(HPoint::new(1.0, -1.0).is_err());
    assert!(HPoint::new(f64::NAN, 1.0).is_err());
}

#[test]
fn geodesic_between_ideal_pair_is_unit_semicircle() {
    let g = Geodesic::between(ideal(-1.0), ideal(1.0)).unwrap();
    assert_eq!(g.line, GeodesicLine::Circle { center: 0.0, radius: 1.0 });
}

#[test]
fn geodesic_with_equal_abscissae_is_vertical() {
    let g = Geodesic::between(pt(0.0, 1.0).into(), pt(0.0, E).into()).unwrap();
    assert_eq!(g.line, GeodesicLine::Vertical { x: 0.0 });
}

#[test]
fn geodesic_semicircle_passes_through_both_points() {
    let (p, q) = (pt(0.0, 1.0), pt(3.0, 2.0));
    let g = Geodesic::between(p.into(), q.into()).unwrap();
    assert!(matches!(g.line, GeodesicLine::Circle { .. }));
    assert!(on_line(&g.line, p) < 1e-12);
    assert!(on_line(&g.line, q) < 1e-12);
}

#[test]
fn coincident_endpoints_are_rejected() {
    assert!(matches!(Geodesic::between(pt(1.0, 1.0).into(), pt(1.0, 1.0).into()), Err(Error::Coincident)));
    assert!(matches!(Geodesic::between(INF, INF), Err(Error::Coincident)));
}

#[test]
fn distance_examples() {
    assert!((distance(pt(0.0, 1.0), pt(0.0, E)) - 1.0).abs() < 1e-15);
    assert_eq!(distance(pt(0.0, 1.0), pt(0.0, 1.0)), 0.0);
}

/// Hyperbolic length of a geodesic segment by quadrature along its Euclidean circle.
fn geodesic_quadrature(p: HPoint, q: HPoint) -> f64 {
    let g = Geodesic::between(p.into(), q.into()).unwrap();
    match g.line {
        GeodesicLine::Circle { center, radius } => {
            let a0 = p.y.atan2(p.x - center);
            let a1 = q.y.atan2(q.x - center);
            let curve = |t: f64| {
                let a = a0 + t * (a1 - a0);
                ((center + radius * a.cos(), radius * a.sin()), (-radius * a.sin() * (a1 - a0), radius * a.cos() * (a1 - a0)))
            };
            arc_length(curve, 0.0, 1.0, 1e-12).unwrap().value
        }
        GeodesicLine::Vertical { .. } => (q.y / p.y).ln().abs(),
    }
}

#[test]
fn distance_agrees_with_arc_length_quadrature() {
    let (p, q) = (pt(0.0, 1.0), pt(1.0, 1.0));
    assert!((distance(p, q) - geodesic_quadrature(p, q)).abs() < 1e-9);
}

#[test]
fn arc_length_examples() {
    let vertical = arc_length(|t| ((0.0, t), (0.0, 1.0)), 1.0, E, 1e-10).unwrap();
    assert!((vertical.value - 1.0).abs() < 1e-10);
    assert!(vertical.error <= 1e-10);

    let horocycle = arc_length(|t| ((t, 1.0), (1.0, 0.0)), 0.0, 2.0, 1e-10).unwrap();
    assert!((horocycle.value - 2.0).abs() < 1e-12);

    let semicircle = arc_length(|t| ((t.cos(), t.sin()), (-t.sin(), t.cos())), PI / 3.0, 2.0 * PI / 3.0, 1e-10).unwrap();
    let closed = (PI / 3.0).tan().ln() - (PI / 6.0).tan().ln();
    assert!((semicircle.value - closed).abs() < 1e-9);
}

#[test]
fn arc_length_touching_the_boundary_is_unbounded() {
    let r = arc_length(|t| ((0.0, t), (0.0, 1.0)), 0.0, 1.0, 1e-10);
    assert!(matches!(r, Err(Error::Unbounded(_))));
}

#[test]
fn polar_chart_examples() {
    let c = PolarChart::standard();
    let p = c.to_halfplane(0.0, FRAC_PI_2).unwrap();
    assert!(p.x.abs() < 1e-15 && (p.y - 1.0).abs() < 1e-15);
    let p = c.to_halfplane(0.0, FRAC_PI_4).unwrap();
    assert!((p.x - 0.5f64.sqrt()).abs() < 1e-15 && (p.y - 0.5f64.sqrt()).abs() < 1e-15);
    let (phi, theta) = c.from_halfplane(pt(3.0, 4.0)).unwrap();
    assert!((phi.exp() - 5.0).abs() < 1e-14);
    assert!((theta - 4f64.atan2(3.0)).abs() < 1e-15);
    let back = c.to_halfplane(phi, theta).unwrap();
    assert!(back.euclidean_distance(&pt(3.0, 4.0)) < 1e-10);
}

#[test]
fn polar_chart_rejects_base_and_bad_angles() {
    let c = PolarChart::along(IdealPoint::Finite(2.0), IdealPoint::Infinity).unwrap();
    assert!(c.to_halfplane(0.0, 0.0).is_err());
    assert!(c.to_halfplane(0.0, PI).is_err());
    assert!(c.from_position(2.0, 0.0).is_err());
}

#[test]
fn equidistant_distance_examples() {
    assert!(equidistant_distance(FRAC_PI_2).unwrap() < 1e-15);
    let d = equidistant_distance(FRAC_PI_4).unwrap();
    assert!((d - (1.0 / (PI / 8.0).tan()).ln()).abs() < 1e-15);
    assert!((d - 0.881374).abs() < 1e-6);
    assert!((equidistant_distance(3.0 * FRAC_PI_4).unwrap() - d).abs() < 1e-15);
    assert!(equidistant_distance(0.0).is_err());
    assert!(equidistant_distance(PI).is_err());
}

#[test]
fn equidistant_distance_matches_quadrature() {
    for k in 1..40 {
        let t0 = PI * k as f64 / 40.0;
        let q = adaptive_simpson(|t| 1.0 / t.sin(), t0.min(FRAC_PI_2), t0.max(FRAC_PI_2), 1e-12);
        assert!((equidistant_distance(t0).unwrap() - q.value).abs() < 1e-10, "θ0 = {t0}");
    }
}

#[test]
fn truncated_side_length_examples() {
    let at_inf = Horocycle::new(IdealPoint::Infinity, 1.0).unwrap();
    let at_zero = Horocycle::new(IdealPoint::Finite(0.0), 1.0).unwrap();
    let l = truncated_side_length(ideal(0.0), INF, Some(&at_zero), Some(&at_inf)).unwrap();
    assert!(l.abs() < 1e-15);
    let raised = Horocycle::new(IdealPoint::Infinity, E).unwrap();
    let l = truncated_side_length(ideal(0.0), INF, Some(&at_zero), Some(&raised)).unwrap();
    assert!((l - 1.0).abs() < 1e-15);
    let (p, q) = (pt(0.3, 1.0), pt(2.0, 0.4));
    assert!((truncated_side_length(p.into(), q.into(), None, None).unwrap() - distance(p, q)).abs() < 1e-12);
}

#[test]
fn overlapping_horodisks_leave_an_empty_side() {
    let at_inf = Horocycle::new(IdealPoint::Infinity, 0.5).unwrap();
    let at_zero = Horocycle::new(IdealPoint::Finite(0.0), 1.0).unwrap();
    let r = truncated_side_length(ideal(0.0), INF, Some(&at_zero), Some(&at_inf));
    assert!(matches!(r, Err(Error::EmptySegment(_))));
}

#[test]
fn horocycle_intersection_examples() {
    let v = Geodesic::between(ideal(0.0), INF).unwrap();
    let p = Horocycle::new(IdealPoint::Infinity, 2.0).unwrap().intersect_geodesic(&v).unwrap();
    assert_eq!((p.x, p.y), (0.0, 2.0));
    let p = Horocycle::new(IdealPoint::Finite(0.0), 1.0).unwrap().intersect_geodesic(&v).unwrap();
    assert_eq!((p.x, p.y), (0.0, 1.0));

    let semi = Geodesic::between(ideal(-1.0), ideal(1.0)).unwrap();
    let top = Horocycle::new(IdealPoint::Infinity, 1.0).unwrap().intersect_geodesic(&semi).unwrap();
    assert_eq!((top.x, top.y), (0.0, 1.0));
    assert!(Horocycle::new(IdealPoint::Infinity, 2.0).unwrap().intersect_geodesic(&semi).is_err());
}

#[test]
fn horocycle_sizes_must_be_positive() {
    assert!(Horocycle::new(IdealPoint::Finite(0.0), 0.0).is_err());
    assert!(Horocycle::new(IdealPoint::Infinity, -1.0).is_err());
}

fn any_point() -> impl Strategy<Value = HPoint> {
    (-5.0..5.0f64, 0.05..5.0f64).prop_map(|(x, y)| pt(x, y))
}

proptest! {
    #[test]
    fn polar_round_trip(base in -3.0..3.0f64, p in any_point()) {
        prop_assume!((p.x - base).hypot(p.y) > 1e-3);
        let c = PolarChart::along(IdealPoint::Finite(base), IdealPoint::Infinity).unwrap();
        let (phi, theta) = c.from_halfplane(p).unwrap();
        let q = c.to_halfplane(phi, theta).unwrap();
        prop_assert!(q.euclidean_distance(&p) < 1e-10 * (1.0 + p.x.abs() + p.y));
    }

    #[test]
    fn polar_chart_is_conformal(phi in -2.0..2.0f64, theta in 0.2..2.9f64) {
        let c = PolarChart::standard();
        let h = 1e-4;
        let p = c.to_halfplane(phi, theta).unwrap();
        let along_phi = distance(p, c.to_halfplane(phi + h, theta).unwrap());
        let along_theta = distance(p, c.to_halfplane(phi, theta + h).unwrap());
        let expected = h / theta.sin();
        prop_assert!((along_phi - expected).abs() < 10.0 * h * h / theta.sin().powi(2));
        prop_assert!((along_theta - expected).abs() < 10.0 * h * h / theta.sin().powi(2));
    }

    #[test]
    fn distance_is_a_metric(p in any_point(), q in any_point(), r in any_point()) {
        let (dpq, dqr, dpr) = (distance(p, q), distance(q, r), distance(p, r));
        prop_assert!((dpq - distance(q, p)).abs() <= 1e-12 * (1.0 + dpq));
        prop_assert!(dpr <= dpq + dqr + 1e-9);
        prop_assert!(dpq >= 0.0);
    }

    #[test]
    fn distance_is_isometry_invariant(p in any_point(), q in any_point(), a in -3.0..3.0f64, b in 3.5..6.0f64) {
        let m = Mobius::normalizing(IdealPoint::Finite(a), IdealPoint::Finite(b)).unwrap();
        let d = distance(p, q);
        let e = distance(m.apply(p), m.apply(q));
        prop_assert!((d - e).abs() <= 1e-9 * (1.0 + d));
    }

    #[test]
    fn shrinking_horocycles_lengthens_sides(a in -3.0..3.0f64, s in 0.1..2.0f64, factor in 0.1..0.9f64) {
        let h = Horocycle::new(IdealPoint::Finite(a), s).unwrap();
        let top = Horocycle::new(IdealPoint::Infinity, 4.0).unwrap();
        let l1 = truncated_side_length(ideal(a), INF, Some(&h), Some(&top)).unwrap();
        let l2 = truncated_side_length(ideal(a), INF, Some(&h.shrunk(factor)), Some(&top)).unwrap();
        prop_assert!(l2 - l1 > 0.0);
        prop_assert!((l2 - l1 + factor.ln()).abs() < 1e-9);
    }
}
