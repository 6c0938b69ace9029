//! Rotational constant-mean-curvature graphs `u = f(θ)` in the polar chart.
//!
//! The profiles satisfy `f'/√(1 + sin²θ f'²) = -2H cot θ + A`. For `H = 0`
//! the parameter is `A`; for `H > 0` it is `k = A/(2H)` and
//! `f' = -2Hg/(sin θ √(1 - 4H²g²))` with `g = cos θ - k sin θ`.

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson_mixed;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

const CASE_TOL: f64 = 1e-12;
const QUAD_TOL: f64 = 1e-12;
const QUAD_REL: f64 = 1e-13;

/// Classification of a profile family by `(H, parameter)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CmcCase {
    MinimalBelowOne,
    MinimalOne,
    MinimalAboveOne,
    A1,
    A2,
    A3,
    B1,
    B2,
    C,
}

impl CmcCase {
    pub fn label(&self) -> &'static str {
        match self {
            CmcCase::MinimalBelowOne => "H0-A<1",
            CmcCase::MinimalOne => "H0-A=1",
            CmcCase::MinimalAboveOne => "H0-A>1",
            CmcCase::A1 => "A1",
            CmcCase::A2 => "A2",
            CmcCase::A3 => "A3",
            CmcCase::B1 => "B1",
            CmcCase::B2 => "B2",
            CmcCase::C => "C",
        }
    }
}

/// Behaviour of a profile at an end of its interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EndBehavior {
    Finite,
    PlusInfinity,
    MinusInfinity,
    InfiniteNormalDerivative,
}

impl EndBehavior {
    fn has_finite_value(self) -> bool {
        matches!(self, EndBehavior::Finite | EndBehavior::InfiniteNormalDerivative)
    }
}

/// A point where the square root in `f'` vanishes. `sign` is the value of
/// `2Hg` there (or `A sin θ` when `H = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
struct Root {
    theta: f64,
    sign: f64,
}

/// One connected component of a profile family.
#[derive(Debug, Clone, PartialEq)]
pub struct CmcProfile {
    pub h: f64,
    pub a: f64,
    pub k: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub lower: EndBehavior,
    pub upper: EndBehavior,
    pub anchor_theta: f64,
    pub anchor_value: f64,
    roots: Vec<Root>,
}

/// All components for one `(H, parameter)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CmcFamily {
    pub h: f64,
    pub param: f64,
    pub case: CmcCase,
    pub components: Vec<CmcProfile>,
}

/// Closed-form roots of `g(θ) = value` on `(0, π)`, in increasing order.
fn roots_of_g(k: f64, value: f64) -> Vec<f64> {
    let n = (1.0 + k * k).sqrt();
    let psi = k.atan();
    let c = (value / n).clamp(-1.0, 1.0);
    let base = c.acos();
    [base - psi, 2.0 * PI - base - psi]
        .into_iter()
        .filter(|t| *t > 0.0 && *t < PI)
        .collect()
}

/// Builds the profile family for `(H, parameter)`.
pub fn family(h: f64, param: f64) -> Result<CmcFamily> {
    if !(h >= 0.0) || !h.is_finite() || !(param >= 0.0) || !param.is_finite() {
        return Err(Error::Misconfiguration(format!(
            "profiles need H ≥ 0 and a non-negative parameter, got H = {h}, parameter = {param}"
        )));
    }
    use EndBehavior::*;
    let mk = |a: f64, k: f64, lo: f64, hi: f64, lower, upper, roots: Vec<Root>| {
        CmcProfile::with_default_anchor(h, a, k, lo, hi, lower, upper, roots)
    };
    if h == 0.0 {
        let a = param;
        return Ok(if (a - 1.0).abs() <= CASE_TOL {
            CmcFamily {
                h,
                param,
                case: CmcCase::MinimalOne,
                components: vec![mk(1.0, 0.0, 0.0, FRAC_PI_2, Finite, PlusInfinity, vec![])],
            }
        } else if a < 1.0 {
            CmcFamily { h, param, case: CmcCase::MinimalBelowOne, components: vec![mk(a, 0.0, 0.0, PI, Finite, Finite, vec![])] }
        } else {
            let t1 = (1.0 / a).asin();
            CmcFamily {
                h,
                param,
                case: CmcCase::MinimalAboveOne,
                components: vec![mk(a, 0.0, 0.0, t1, Finite, InfiniteNormalDerivative, vec![Root { theta: t1, sign: 1.0 }])],
            }
        });
    }
    let k = param;
    let a = 2.0 * h * k;
    let c = 1.0 / (2.0 * h);
    if (h - 0.5).abs() <= CASE_TOL {
        if k <= CASE_TOL {
            return Ok(CmcFamily {
                h,
                param,
                case: CmcCase::B1,
                components: vec![mk(a, k, 0.0, PI, PlusInfinity, PlusInfinity, vec![])],
            });
        }
        let t1 = roots_of_g(k, -1.0)[0];
        return Ok(CmcFamily {
            h,
            param,
            case: CmcCase::B2,
            components: vec![mk(a, k, 0.0, t1, PlusInfinity, InfiniteNormalDerivative, vec![Root { theta: t1, sign: -1.0 }])],
        });
    }
    if h > 0.5 {
        let t1 = roots_of_g(k, c)[0];
        let t2 = roots_of_g(k, -c)[0];
        return Ok(CmcFamily {
            h,
            param,
            case: CmcCase::C,
            components: vec![mk(
                a,
                k,
                t1,
                t2,
                InfiniteNormalDerivative,
                InfiniteNormalDerivative,
                vec![Root { theta: t1, sign: 1.0 }, Root { theta: t2, sign: -1.0 }],
            )],
        });
    }
    let k_star = (c * c - 1.0).sqrt();
    if (k - k_star).abs() <= CASE_TOL * (1.0 + k_star) {
        let t0 = PI - k.atan();
        let root = vec![Root { theta: t0, sign: -1.0 }];
        Ok(CmcFamily {
            h,
            param,
            case: CmcCase::A2,
            components: vec![
                mk(a, k, 0.0, t0, PlusInfinity, PlusInfinity, root.clone()),
                mk(a, k, t0, PI, MinusInfinity, PlusInfinity, root),
            ],
        })
    } else if k < k_star {
        Ok(CmcFamily { h, param, case: CmcCase::A1, components: vec![mk(a, k, 0.0, PI, PlusInfinity, PlusInfinity, vec![])] })
    } else {
        let r = roots_of_g(k, -c);
        let (t1, t2) = (r[0], r[1]);
        Ok(CmcFamily {
            h,
            param,
            case: CmcCase::A3,
            components: vec![
                mk(a, k, 0.0, t1, PlusInfinity, InfiniteNormalDerivative, vec![Root { theta: t1, sign: -1.0 }]),
                mk(a, k, t2, PI, InfiniteNormalDerivative, PlusInfinity, vec![Root { theta: t2, sign: -1.0 }]),
            ],
        })
    }
}

impl CmcProfile {
    #[allow(clippy::too_many_arguments)]
    fn with_default_anchor(
        h: f64,
        a: f64,
        k: f64,
        lo: f64,
        hi: f64,
        lower: EndBehavior,
        upper: EndBehavior,
        roots: Vec<Root>,
    ) -> Self {
        let anchor_theta = if lower.has_finite_value() {
            lo
        } else if upper.has_finite_value() {
            hi
        } else {
            0.5 * (lo + hi)
        };
        CmcProfile { h, a, k, theta_lo: lo, theta_hi: hi, lower, upper, anchor_theta, anchor_value: 0.0, roots }
    }

    /// Same profile normalised so that `f(theta) = value`.
    pub fn anchored(mut self, theta: f64, value: f64) -> Result<Self> {
        if !self.contains_closed(theta) {
            return Err(Error::Domain(format!("anchor θ = {theta} is outside the profile interval")));
        }
        self.anchor_theta = theta;
        self.anchor_value = value;
        Ok(self)
    }

    fn contains_closed(&self, theta: f64) -> bool {
        let lo_ok = theta > self.theta_lo || (theta == self.theta_lo && self.lower.has_finite_value());
        let hi_ok = theta < self.theta_hi || (theta == self.theta_hi && self.upper.has_finite_value());
        lo_ok && hi_ok
    }

    fn g(&self, theta: f64) -> f64 {
        theta.cos() - self.k * theta.sin()
    }

    /// `1 - (2Hg)²` (or `1 - A² sin²θ`), factorised near a root so that it
    /// keeps full relative accuracy when `θ = root + delta`.
    fn radicand(&self, theta: f64, near: Option<(Root, f64)>) -> f64 {
        let near = near.or_else(|| {
            self.roots
                .iter()
                .map(|r| (*r, theta - r.theta))
                .filter(|(_, d)| d.abs() < 0.25)
                .min_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        });
        if self.h == 0.0 {
            let s = self.a * theta.sin();
            return match near {
                Some((r, d)) => {
                    let minus = -2.0 * self.a * (r.theta + 0.5 * d).cos() * (0.5 * d).sin();
                    minus * (1.0 + s)
                }
                None => (1.0 - s) * (1.0 + s),
            };
        }
        let q = 2.0 * self.h * self.g(theta);
        match near {
            Some((r, d)) => {
                let n = (1.0 + self.k * self.k).sqrt();
                let psi = self.k.atan();
                let dg = 2.0 * n * (r.theta + psi + 0.5 * d).sin() * (0.5 * d).sin();
                let minus = r.sign * 2.0 * self.h * dg;
                minus * (1.0 + r.sign * q)
            }
            None => {
                // Half-angle forms keep 1 ∓ 2Hg accurate near θ = 0 and θ = π.
                let (sh, ch) = (0.5 * theta).sin_cos();
                let ks = self.k * theta.sin();
                let minus = (1.0 - 2.0 * self.h) + 2.0 * self.h * (2.0 * sh * sh + ks);
                let plus = (1.0 - 2.0 * self.h) + 2.0 * self.h * (2.0 * ch * ch - ks);
                minus * plus
            }
        }
    }

    fn derivative_with(&self, theta: f64, near: Option<(Root, f64)>) -> f64 {
        let w = self.radicand(theta, near);
        if self.h == 0.0 {
            self.a / w.sqrt()
        } else {
            -2.0 * self.h * self.g(theta) / (theta.sin() * w.sqrt())
        }
    }

    /// `f'(θ)`.
    pub fn derivative(&self, theta: f64) -> f64 {
        self.derivative_with(theta, None)
    }

    /// `f'/√(1 + sin²θ f'²) + 2H cot θ`, which equals `A` on solutions.
    pub fn flux_constant(&self, theta: f64) -> f64 {
        let d = self.derivative(theta);
        let s = theta.sin();
        d / (1.0 + s * s * d * d).sqrt() + 2.0 * self.h * theta.cos() / s
    }

    /// `f'/√(1 + sin²θ f'²)`, whose derivative is `2H/sin²θ`.
    pub fn flux_density(&self, theta: f64) -> f64 {
        let d = self.derivative(theta);
        let s = theta.sin();
        d / (1.0 + s * s * d * d).sqrt()
    }

    fn root_at(&self, theta: f64) -> Option<Root> {
        self.roots.iter().copied().find(|r| r.theta == theta)
    }

    /// `∫_a^b f'` with endpoint substitutions at square-root singularities.
    fn integral(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        if a > b {
            return -self.integral(b, a);
        }
        let ra = self.root_at(a);
        let rb = self.root_at(b);
        let len = b - a;
        let q = adaptive_simpson_mixed(
            |tau| {
                let (s, ds, one_minus) = match (ra.is_some(), rb.is_some()) {
                    (true, false) => (tau * tau, 2.0 * tau, (1.0 - tau) * (1.0 + tau)),
                    (false, true) => (1.0 - (1.0 - tau).powi(2), 2.0 * (1.0 - tau), (1.0 - tau).powi(2)),
                    (true, true) => (
                        tau * tau * (3.0 - 2.0 * tau),
                        6.0 * tau * (1.0 - tau),
                        (1.0 - tau).powi(2) * (1.0 + 2.0 * tau),
                    ),
                    (false, false) => (tau, 1.0, 1.0 - tau),
                };
                if ds == 0.0 {
                    return 0.0;
                }
                let theta = a + len * s;
                let near = if let (Some(r), true) = (rb, s > 0.5) {
                    Some((r, -len * one_minus))
                } else {
                    ra.map(|r| (r, len * s))
                };
                self.derivative_with(theta, near) * len * ds
            },
            0.0,
            1.0,
            QUAD_TOL,
            QUAD_REL,
        );
        q.value
    }

    /// `f(θ)` relative to the anchor.
    pub fn value(&self, theta: f64) -> Result<f64> {
        if !self.contains_closed(theta) {
            return Err(Error::Domain(format!(
                "θ = {theta} is outside the profile interval ({}, {})",
                self.theta_lo, self.theta_hi
            )));
        }
        Ok(self.anchor_value + self.integral(self.anchor_theta, theta))
    }

    /// `n` samples `(θ, f, f')` across the interval. Ends with a finite
    /// value are included; infinite ends are approached to within
    /// `1e-6` of the interval length.
    pub fn sample(&self, n: usize) -> Result<Vec<(f64, f64, f64)>> {
        let n = n.max(2);
        let pad = 1e-6 * (self.theta_hi - self.theta_lo);
        let lo = if self.lower.has_finite_value() { self.theta_lo } else { self.theta_lo + pad };
        let hi = if self.upper.has_finite_value() { self.theta_hi } else { self.theta_hi - pad };
        let thetas: Vec<f64> = (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect();
        let mut out = Vec::with_capacity(n);
        let mut f = self.value(thetas[0])?;
        for (i, &t) in thetas.iter().enumerate() {
            if i > 0 {
                f += self.integral(thetas[i - 1], t);
            }
            let d = if self.root_at(t).is_some() { f64::INFINITY } else { self.derivative(t) };
            out.push((t, f, d));
        }
        Ok(out)
    }
}

impl CmcFamily {
    /// Lower component, or the only one.
    pub fn primary(&self) -> &CmcProfile {
        &self.components[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barrier_is_the_critical_minimal_profile() {
        let f = family(0.0, 1.0).unwrap();
        let p = f.primary();
        for t in [0.2, 0.7, 1.3] {
            let exact = crate::exact::Barrier::profile(t);
            assert!((p.value(t).unwrap() - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn critical_angle_closed_form() {
        let f = family(0.0, 2.0).unwrap();
        assert_eq!(f.case, CmcCase::MinimalAboveOne);
        assert!((f.primary().theta_hi - PI / 6.0).abs() < 1e-15);
        assert!(f.primary().value(PI / 6.0).unwrap().is_finite());
    }

    #[test]
    fn b2_root_solves_g() {
        let f = family(0.5, 0.7).unwrap();
        let t1 = f.primary().theta_hi;
        assert!((t1.cos() - 0.7 * t1.sin() + 1.0).abs() < 1e-14);
    }
}
