use proptest::prelude::*;
use scherk::exact::{family, Barrier, CmcCase, CmcProfile, EndBehavior};
use scherk::hyperbolic::{HPoint, PolarChart};
use scherk::quadrature::adaptive_simpson;
use scherk::Error;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

#[test]
fn barrier_examples() {
    let b = Barrier;
    assert!((b.value(3.0, 4.0).unwrap() - 3f64.ln()).abs() < 1e-15);
    assert!((b.value(3.0, 4.0).unwrap() - 1.098612).abs() < 1e-6);
    assert!(b.value(1.0, 1e-12).unwrap().abs() < 1e-11);
    assert!(b.value(0.0, 1.0).is_err());
    assert!(b.value(-1.0, 1.0).is_err());
}

#[test]
fn barrier_is_constant_on_rays() {
    let b = Barrier;
    for theta in [0.1f64, 0.5, 1.0, 1.4] {
        let exact = ((1.0 + theta.sin()) / theta.cos()).ln();
        for r in [0.01f64, 1.0, 30.0] {
            let v = b.value(r * theta.cos(), r * theta.sin()).unwrap();
            assert!((v - exact).abs() < 1e-13);
        }
    }
}

#[test]
fn classification_examples() {
    let f = family(0.0, 2.0).unwrap();
    assert_eq!(f.case.label(), "H0-A>1");
    assert!((f.primary().theta_hi - FRAC_PI_6).abs() < 1e-15);
    assert_eq!(f.primary().upper, EndBehavior::InfiniteNormalDerivative);

    let f = family(0.5, 0.0).unwrap();
    assert_eq!(f.case, CmcCase::B1);
    assert_eq!((f.primary().theta_lo, f.primary().theta_hi), (0.0, PI));

    let k_star = ((1.0f64 / 0.8).powi(2) - 1.0).sqrt();
    assert!((k_star - 0.75).abs() < 1e-15);
    assert_eq!(family(0.4, 0.5).unwrap().case, CmcCase::A1);
    assert_eq!(family(0.4, 0.75).unwrap().case, CmcCase::A2);
    assert_eq!(family(0.4, 1.0).unwrap().case, CmcCase::A3);
    assert_eq!(family(0.0, 0.5).unwrap().case, CmcCase::MinimalBelowOne);
    assert_eq!(family(0.0, 1.0).unwrap().case, CmcCase::MinimalOne);
    assert_eq!(family(0.5, 1.0).unwrap().case, CmcCase::B2);
    assert_eq!(family(0.8, 0.3).unwrap().case, CmcCase::C);
}

#[test]
fn negative_inputs_are_rejected() {
    assert!(family(-0.1, 1.0).is_err());
    assert!(family(0.3, -1.0).is_err());
    assert!(family(f64::NAN, 1.0).is_err());
}

fn g(k: f64, t: f64) -> f64 {
    t.cos() - k * t.sin()
}

#[test]
fn interval_ends_solve_the_root_equation() {
    // A3: the roots of |g| = 1/(2H) bracket θ0 = π - arctan k.
    let (h, k) = (0.4, 1.0);
    let f = family(h, k).unwrap();
    let (t1, t2) = (f.components[0].theta_hi, f.components[1].theta_lo);
    let t0 = PI - k.atan();
    assert!(t1 < t0 && t0 < t2);
    for t in [t1, t2] {
        assert!((2.0 * h * g(k, t).abs() - 1.0).abs() < 1e-12);
    }
    // C: both ends lie below θ0.
    let (h, k) = (0.8, 0.3);
    let p = family(h, k).unwrap().primary().clone();
    assert!(p.theta_lo < p.theta_hi && p.theta_hi < PI - k.atan());
    for t in [p.theta_lo, p.theta_hi] {
        assert!((2.0 * h * g(k, t).abs() - 1.0).abs() < 1e-12);
    }
    // B2: single end where g = -1.
    let p = family(0.5, 1.0).unwrap().primary().clone();
    assert!((g(1.0, p.theta_hi) + 1.0).abs() < 1e-12);
}

#[test]
fn end_behaviour_matches_the_case_table() {
    use EndBehavior::*;
    let ends = |h: f64, p: f64| -> Vec<(EndBehavior, EndBehavior)> {
        family(h, p).unwrap().components.iter().map(|c| (c.lower, c.upper)).collect()
    };
    assert_eq!(ends(0.0, 0.5), vec![(Finite, Finite)]);
    assert_eq!(ends(0.0, 1.0), vec![(Finite, PlusInfinity)]);
    assert_eq!(ends(0.0, 2.0), vec![(Finite, InfiniteNormalDerivative)]);
    assert_eq!(ends(0.4, 0.5), vec![(PlusInfinity, PlusInfinity)]);
    assert_eq!(ends(0.4, 0.75), vec![(PlusInfinity, PlusInfinity), (MinusInfinity, PlusInfinity)]);
    assert_eq!(ends(0.4, 1.0), vec![(PlusInfinity, InfiniteNormalDerivative), (InfiniteNormalDerivative, PlusInfinity)]);
    assert_eq!(ends(0.5, 0.0), vec![(PlusInfinity, PlusInfinity)]);
    assert_eq!(ends(0.5, 1.0), vec![(PlusInfinity, InfiniteNormalDerivative)]);
    assert_eq!(ends(0.8, 0.3), vec![(InfiniteNormalDerivative, InfiniteNormalDerivative)]);
}

#[test]
fn derivative_examples() {
    let p = family(0.0, 1.0).unwrap().primary().clone();
    assert!((p.derivative(FRAC_PI_4) - 2f64.sqrt()).abs() < 1e-14);
    let p = family(0.5, 0.0).unwrap().primary().clone();
    assert!(p.derivative(FRAC_PI_2).abs() < 1e-15);
    for t in [0.3f64, 1.0, 2.0, 2.8] {
        let exact = -t.cos() / t.sin().powi(2);
        assert!((p.derivative(t) - exact).abs() < 1e-12 * (1.0 + exact.abs()));
    }
}

fn all_profiles() -> Vec<(f64, f64, CmcProfile)> {
    let params = [
        (0.0, 0.0),
        (0.0, 0.5),
        (0.0, 1.0),
        (0.0, 2.0),
        (0.4, 0.5),
        (0.4, 0.75),
        (0.4, 1.0),
        (0.5, 0.0),
        (0.5, 1.0),
        (0.8, 0.3),
        (1.5, 2.0),
    ];
    params
        .iter()
        .flat_map(|&(h, p)| family(h, p).unwrap().components.into_iter().map(move |c| (h, p, c)))
        .collect()
}

fn interior(p: &CmcProfile, n: usize, margin: f64) -> Vec<f64> {
    let w = p.theta_hi - p.theta_lo;
    (0..n).map(|i| p.theta_lo + w * (margin + (1.0 - 2.0 * margin) * i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn derivative_satisfies_the_first_integral() {
    for (h, _, p) in all_profiles() {
        for t in interior(&p, 200, 1e-3) {
            let d = p.derivative(t);
            let s = t.sin();
            let lhs = d / (1.0 + s * s * d * d).sqrt();
            let rhs = -2.0 * h * t.cos() / s + p.a;
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()), "H = {h}, θ = {t}: {lhs} vs {rhs}");
            assert!((p.flux_constant(t) - p.a).abs() < 1e-12 * (1.0 + p.a + rhs.abs()));
        }
    }
}

#[test]
fn profiles_solve_the_mean_curvature_equation() {
    for (h, param, p) in all_profiles() {
        for t in interior(&p, 1000, 1e-2) {
            let e = 1e-4 * t.sin();
            let dd = (p.flux_density(t + e) - p.flux_density(t - e)) / (2.0 * e);
            let rhs = 2.0 * h / t.sin().powi(2);
            assert!((dd - rhs).abs() < 1e-6 * (1.0 + rhs), "H = {h}, parameter {param}, θ = {t}: {dd} vs {rhs}");
        }
    }
}

#[test]
fn values_reproduce_the_derivative() {
    for (h, param, p) in all_profiles() {
        let e = 1e-5;
        for t in interior(&p, 40, 0.05) {
            let fd = (p.value(t + e).unwrap() - p.value(t - e).unwrap()) / (2.0 * e);
            let d = p.derivative(t);
            assert!((fd - d).abs() < 1e-6 * (1.0 + d.abs()), "H = {h}, parameter {param}, θ = {t}: {fd} vs {d}");
        }
    }
}

#[test]
fn values_are_monotone_where_the_derivative_has_one_sign() {
    for (_, _, p) in all_profiles() {
        let ts = interior(&p, 100, 1e-3);
        for w in ts.windows(2) {
            let (d0, d1) = (p.derivative(w[0]), p.derivative(w[1]));
            if d0 > 0.0 && d1 > 0.0 {
                assert!(p.value(w[1]).unwrap() > p.value(w[0]).unwrap());
            } else if d0 < 0.0 && d1 < 0.0 {
                assert!(p.value(w[1]).unwrap() < p.value(w[0]).unwrap());
            }
        }
    }
}

#[test]
fn value_examples() {
    let b1 = family(0.5, 0.0).unwrap().primary().clone().anchored(FRAC_PI_2, 1.0).unwrap();
    assert!((b1.value(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-12);
    assert!((b1.value(FRAC_PI_6).unwrap() - 2.0).abs() < 1e-9);
    for t in [0.2, 0.9, 2.5] {
        assert!((b1.value(t).unwrap() - 1.0 / t.sin()).abs() < 1e-9);
    }

    let p = family(0.0, 1.0).unwrap().primary().clone();
    let diff = p.value(FRAC_PI_3).unwrap() - p.value(FRAC_PI_4).unwrap();
    let sec_tan = |t: f64| (1.0 / t.cos() + t.tan()).ln();
    assert!((diff - (sec_tan(FRAC_PI_3) - sec_tan(FRAC_PI_4))).abs() < 1e-9);
    assert!((diff - 0.435584).abs() < 1e-6);
    let q = adaptive_simpson(|t| 1.0 / t.cos(), FRAC_PI_4, FRAC_PI_3, 1e-12);
    assert!((diff - q.value).abs() < 1e-9);

    let flat = family(0.0, 0.0).unwrap().primary().clone().anchored(1.0, 3.5).unwrap();
    for t in [0.0, 0.5, 2.0, PI] {
        assert_eq!(flat.value(t).unwrap(), 3.5);
    }
}

#[test]
fn values_outside_the_interval_are_errors() {
    let p = family(0.0, 2.0).unwrap().primary().clone();
    assert!(matches!(p.value(1.0), Err(Error::Domain(_))));
    assert!(p.value(FRAC_PI_6).is_ok());
    let p = family(0.0, 1.0).unwrap().primary().clone();
    assert!(p.value(FRAC_PI_2).is_err());
}

#[test]
fn critical_minimal_profile_is_the_barrier() {
    let p = family(0.0, 1.0).unwrap().primary().clone();
    assert_eq!(p.anchor_theta, 0.0);
    let chart = PolarChart::standard();
    let b = Barrier;
    for (x, y) in [(3.0, 4.0), (0.1, 2.0), (5.0, 0.01), (1.0, 1.0)] {
        let (_, theta) = chart.from_halfplane(HPoint::new(x, y).unwrap()).unwrap();
        assert!((p.value(theta).unwrap() - b.value(x, y).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn barriers_below_a_right_angle_end_with_infinite_slope() {
    for theta0 in [0.3f64, 0.8, 1.2] {
        let p = family(0.0, 1.0 / theta0.sin()).unwrap().primary().clone();
        assert!((p.theta_hi - theta0).abs() < 1e-14);
        assert_eq!(p.upper, EndBehavior::InfiniteNormalDerivative);
        assert!(p.value(p.theta_hi).unwrap().is_finite());
        assert_eq!(p.value(0.0).unwrap(), 0.0);
    }
}

#[test]
fn minimal_profiles_are_odd_about_a_right_angle() {
    for a in [0.3, 0.7, 0.95] {
        let p = family(0.0, a).unwrap().primary().clone().anchored(FRAC_PI_2, 0.0).unwrap();
        for t in [0.1, 0.6, 1.2] {
            assert!((p.value(t).unwrap() + p.value(PI - t).unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn critical_minimal_flux_saturates() {
    let p = family(0.0, 1.0).unwrap().primary().clone();
    let mut last = 0.0;
    for delta in [1e-1, 1e-2, 1e-3, 1e-4] {
        let t = FRAC_PI_2 - delta;
        let density = t.sin() * p.flux_density(t);
        assert!(density > last);
        last = density;
    }
    assert!((last - 1.0).abs() < 1e-7);
}

#[test]
fn subcritical_profiles_blow_up_near_the_wall() {
    let (h, k_star) = (0.4, 0.75);
    // The growth is logarithmic in the gap to the critical parameter.
    let mut last = 0.0f64;
    for gap in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5] {
        let k = k_star - gap;
        let p = family(h, k).unwrap().primary().clone();
        assert_eq!(family(h, k).unwrap().case, CmcCase::A1);
        let t0 = PI - k.atan();
        let v = (p.value(t0).unwrap() - p.value(FRAC_PI_2).unwrap()).abs();
        assert!(v > last + 1.0, "gap {gap}: {v} vs {last}");
        last = v;
    }
}

#[test]
fn samples_cover_the_interval() {
    let p = family(0.0, 2.0).unwrap().primary().clone();
    let s = p.sample(11).unwrap();
    assert_eq!(s.len(), 11);
    assert_eq!(s[0].0, 0.0);
    assert_eq!(s[10].0, p.theta_hi);
    assert!(s[10].2.is_infinite());
    for (t, f, _) in &s {
        assert!((f - p.value(*t).unwrap()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_profiles_satisfy_the_first_integral(h in 0.0..2.0f64, param in 0.0..3.0f64, u in 0.01..0.99f64) {
        let f = family(h, param).unwrap();
        for p in &f.components {
            let t = p.theta_lo + u * (p.theta_hi - p.theta_lo);
            let d = p.derivative(t);
            prop_assume!(d.is_finite());
            prop_assert!((p.flux_constant(t) - p.a).abs() < 1e-9 * (1.0 + d.abs()));
            let q = 2.0 * h * g(p.k, t);
            if h > 0.0 {
                prop_assert!(q.abs() < 1.0);
            }
        }
    }
}
