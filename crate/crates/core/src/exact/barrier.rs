//! The minimal graph `ln((√(x²+y²) + y)/x)` over `{x > 0}`.
//!
//! It is `+∞` on the geodesic `{x = 0}` and `0` on the ideal half-line
//! `{y = 0, x > 0}`. In the standard polar chart it depends on `θ` only.

use crate::error::{Error, Result};
use crate::hyperbolic::HPoint;

/// Evaluator for the barrier in half-plane coordinates.
#[derive(Debug, Clone, Copy, Default)]
pub struct Barrier;

impl Barrier {
    pub fn value(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0) || !(y > 0.0) {
            return Err(Error::Domain(format!("barrier is defined for x, y > 0, got ({x}, {y})")));
        }
        Ok(((x.hypot(y) + y) / x).ln())
    }

    pub fn value_at(&self, p: HPoint) -> Result<f64> {
        self.value(p.x, p.y)
    }

    /// Euclidean gradient `(-y/(x r), 1/r)` with `r = √(x² + y²)`.
    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let r = x.hypot(y);
        (-y / (x * r), 1.0 / r)
    }

    /// Profile in the polar chart.
    pub fn profile(theta: f64) -> f64 {
        ((1.0 + theta.sin()) / theta.cos()).ln()
    }

    pub fn profile_derivative(theta: f64) -> f64 {
        1.0 / theta.cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_profile_agrees() {
        let b = Barrier;
        for theta in [0.1f64, 0.6, 1.2, 1.5] {
            let r = 1.7;
            let v = b.value(r * theta.cos(), r * theta.sin()).unwrap();
            assert!((v - Barrier::profile(theta)).abs() < 1e-13);
        }
    }

    #[test]
    fn gradient_matches_differences() {
        let b = Barrier;
        let (x, y, e) = (1.3, 0.8, 1e-6);
        let (gx, gy) = b.gradient(x, y);
        let dx = (b.value(x + e, y).unwrap() - b.value(x - e, y).unwrap()) / (2.0 * e);
        let dy = (b.value(x, y + e).unwrap() - b.value(x, y - e).unwrap()) / (2.0 * e);
        assert!((gx - dx).abs() < 1e-8 && (gy - dy).abs() < 1e-8);
    }
}
