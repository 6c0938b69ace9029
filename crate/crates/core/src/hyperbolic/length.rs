use super::geodesic::Geodesic;
use super::horocycle::Horocycle;
use super::point::{Endpoint, HPoint};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, Quadrature};

/// Hyperbolic distance between two points.
pub fn distance(p: HPoint, q: HPoint) -> f64 {
    let e = (p.x - q.x).hypot(p.y - q.y);
    2.0 * (e / (2.0 * (p.y * q.y).sqrt())).asinh()
}

/// Distance between the geodesic `{θ = π/2}` and the equidistant `{θ = θ0}`.
pub fn equidistant_distance(theta0: f64) -> Result<f64> {
    if !(theta0 > 0.0 && theta0 < std::f64::consts::PI) {
        return Err(Error::Domain(format!("angle {theta0} is outside (0, π)")));
    }
    Ok(theta0.cos().abs().atanh())
}

/// Length of the geodesic side from `p` to `q` after removing the horodisks
/// at its ideal endpoints.
pub fn truncated_side_length(
    p: Endpoint,
    q: Endpoint,
    hp: Option<&Horocycle>,
    hq: Option<&Horocycle>,
) -> Result<f64> {
    let g = Geodesic::between(p, q)?;
    let cut = |e: Endpoint, h: Option<&Horocycle>| -> Result<f64> {
        match e {
            Endpoint::Interior(pt) => Ok(g.line.coordinate(pt)),
            Endpoint::Ideal(c) => {
                let h = h.ok_or_else(|| Error::Unbounded(format!("ideal endpoint {c} has no horocycle")))?;
                if !h.center.approx_eq(c, 1e-12 * (1.0 + c.finite().unwrap_or(0.0).abs())) {
                    return Err(Error::Misconfiguration(format!("horocycle is not centred at {c}")));
                }
                Ok(g.line.coordinate(h.intersect_geodesic(&g)?))
            }
        }
    };
    let sigma = g.direction();
    let len = sigma * (cut(q, hq)? - cut(p, hp)?);
    if len < -1e-12 * (1.0 + len.abs()) {
        return Err(Error::EmptySegment(format!("horodisks overlap along the side by {}", -len)));
    }
    if !len.is_finite() {
        return Err(Error::Overflow("side length is not finite".into()));
    }
    Ok(len.max(0.0))
}

/// Hyperbolic length of a parametrised curve `t ↦ ((x, y), (x', y'))`.
pub fn arc_length<F>(curve: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> ((f64, f64), (f64, f64)),
{
    let mut touched = false;
    let q = adaptive_simpson(
        |t| {
            let ((_, y), (dx, dy)) = curve(t);
            if y <= 0.0 || !y.is_finite() {
                touched = true;
                return 0.0;
            }
            dx.hypot(dy) / y
        },
        a,
        b,
        tol,
    );
    if touched {
        return Err(Error::Unbounded("curve reaches the ideal boundary".into()));
    }
    Ok(q)
}

/// Like [`arc_length`] but ignores the parts of the curve below `y_floor`.
pub fn arc_length_truncated<F>(curve: F, a: f64, b: f64, y_floor: f64, tol: f64) -> Quadrature
where
    F: Fn(f64) -> ((f64, f64), (f64, f64)),
{
    adaptive_simpson(
        |t| {
            let ((_, y), (dx, dy)) = curve(t);
            if y < y_floor {
                0.0
            } else {
                dx.hypot(dy) / y
            }
        },
        a,
        b,
        tol,
    )
}
