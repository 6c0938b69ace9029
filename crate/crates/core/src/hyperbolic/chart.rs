use super::geodesic::Geodesic;
use super::mobius::Mobius;
use super::point::{Endpoint, HPoint, IdealPoint};
use crate::error::{Error, Result};

/// Polar coordinates `(φ, θ) ↦ (e^φ cos θ, e^φ sin θ)` about an ideal base
/// point, after a normalising isometry that sends the base to `0`.
///
/// In these coordinates the metric is `(dφ² + dθ²)/sin²θ`, the lines
/// `{φ = const}` are geodesics orthogonal to `{θ = π/2}` and the lines
/// `{θ = const}` are equidistant from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarChart {
    pub base: IdealPoint,
    to_normal: Mobius,
}

impl Default for PolarChart {
    fn default() -> Self {
        Self::standard()
    }
}

impl PolarChart {
    /// Chart based at `0` with no normalisation.
    pub fn standard() -> Self {
        Self { base: IdealPoint::Finite(0.0), to_normal: Mobius::IDENTITY }
    }

    /// Chart based at `base` whose axis `{θ = π/2}` ends at `opposite`.
    pub fn along(base: IdealPoint, opposite: IdealPoint) -> Result<Self> {
        Ok(Self { base, to_normal: Mobius::normalizing(base, opposite)? })
    }

    /// Chart based at `base` in which `point` has coordinates `(0, π/2)`.
    pub fn normalized_at(base: IdealPoint, point: HPoint) -> Result<Self> {
        let g = Geodesic::between(Endpoint::Ideal(base), Endpoint::Interior(point))?;
        let tol = 1e-12 * (1.0 + base.finite().unwrap_or(0.0).abs());
        let other = if g.line.positive_end().approx_eq(base, tol) {
            g.line.negative_end()
        } else {
            g.line.positive_end()
        };
        let m = Mobius::normalizing(base, other)?;
        let t = m.apply(point).y;
        Ok(Self { base, to_normal: Mobius::dilation(1.0 / t).compose(&m) })
    }

    pub fn normalizing_map(&self) -> Mobius {
        self.to_normal
    }

    /// `(φ, θ)` of a half-plane point.
    pub fn from_halfplane(&self, p: HPoint) -> Result<(f64, f64)> {
        let q = self.to_normal.apply(p);
        let r = q.x.hypot(q.y);
        if r == 0.0 || !r.is_finite() {
            return Err(Error::Domain("point coincides with the chart base".into()));
        }
        Ok((r.ln(), q.y.atan2(q.x)))
    }

    /// Chart coordinates of a point of the closed half-plane. Finite ideal
    /// points other than the base land on `θ ∈ {0, π}`.
    pub fn from_position(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        if y > 0.0 {
            return self.from_halfplane(HPoint::new_unchecked(x, y));
        }
        match self.to_normal.apply_ideal(IdealPoint::Finite(x)) {
            IdealPoint::Finite(a) if a != 0.0 => Ok((a.abs().ln(), if a > 0.0 { 0.0 } else { std::f64::consts::PI })),
            _ => Err(Error::Domain("ideal point is an end of the chart axis".into())),
        }
    }

    pub fn to_halfplane(&self, phi: f64, theta: f64) -> Result<HPoint> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) || !phi.is_finite() {
            return Err(Error::Domain(format!("(φ, θ) = ({phi}, {theta}) is outside the chart")));
        }
        let r = phi.exp();
        if !r.is_finite() || r == 0.0 {
            return Err(Error::Overflow(format!("e^φ overflows for φ = {phi}")));
        }
        let q = HPoint::new_unchecked(r * theta.cos(), r * theta.sin());
        Ok(self.to_normal.inverse().apply(q))
    }

    /// Conformal factor of the chart metric.
    pub fn lambda(theta: f64) -> f64 {
        1.0 / theta.sin()
    }
}
