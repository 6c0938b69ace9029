use super::point::{Endpoint, HPoint, IdealPoint};
use crate::error::{Error, Result};

/// The full geodesic line carrying a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeodesicLine {
    /// `{x = const}`, ending at `x` and `∞`.
    Vertical { x: f64 },
    /// Semicircle centred on the real axis.
    Circle { center: f64, radius: f64 },
}

impl GeodesicLine {
    /// Ideal end reached as the arc-length coordinate tends to `+∞`.
    pub fn positive_end(&self) -> IdealPoint {
        match *self {
            GeodesicLine::Vertical { .. } => IdealPoint::Infinity,
            GeodesicLine::Circle { center, radius } => IdealPoint::Finite(center + radius),
        }
    }

    /// Ideal end reached as the arc-length coordinate tends to `-∞`.
    pub fn negative_end(&self) -> IdealPoint {
        match *self {
            GeodesicLine::Vertical { x } => IdealPoint::Finite(x),
            GeodesicLine::Circle { center, radius } => IdealPoint::Finite(center - radius),
        }
    }

    /// Signed hyperbolic arc-length coordinate of a point on the line.
    pub fn coordinate(&self, p: HPoint) -> f64 {
        match *self {
            GeodesicLine::Vertical { .. } => p.y.ln(),
            GeodesicLine::Circle { center, .. } => {
                let dx = p.x - center;
                let r = dx.hypot(p.y);
                let half_tan = if dx >= 0.0 { p.y / (r + dx) } else { (r - dx) / p.y };
                -half_tan.ln()
            }
        }
    }

    pub fn point_at(&self, s: f64) -> HPoint {
        match *self {
            GeodesicLine::Vertical { x } => HPoint::new_unchecked(x, s.exp()),
            GeodesicLine::Circle { center, radius } => {
                let t = 2.0 * (-s).exp().atan();
                HPoint::new_unchecked(center + radius * t.cos(), radius * t.sin())
            }
        }
    }

    /// Euclidean distance from a point of the plane to the line.
    pub fn euclidean_offset(&self, x: f64, y: f64) -> f64 {
        match *self {
            GeodesicLine::Vertical { x: x0 } => (x - x0).abs(),
            GeodesicLine::Circle { center, radius } => ((x - center).hypot(y) - radius).abs(),
        }
    }

    /// Euclidean foot of the perpendicular from `(x, y)`, with `y > 0`.
    pub fn closest_point(&self, x: f64, y: f64) -> HPoint {
        match *self {
            GeodesicLine::Vertical { x: x0 } => HPoint::new_unchecked(x0, y.max(f64::MIN_POSITIVE)),
            GeodesicLine::Circle { center, radius } => {
                let a = y.max(0.0).atan2(x - center).clamp(1e-12, std::f64::consts::PI - 1e-12);
                HPoint::new_unchecked(center + radius * a.cos(), radius * a.sin())
            }
        }
    }

    fn angle(&self, e: Endpoint) -> f64 {
        let GeodesicLine::Circle { center, radius } = *self else { unreachable!() };
        match e {
            Endpoint::Interior(p) => p.y.atan2(p.x - center),
            Endpoint::Ideal(IdealPoint::Finite(a)) => {
                if (a - (center + radius)).abs() <= (a - (center - radius)).abs() {
                    0.0
                } else {
                    std::f64::consts::PI
                }
            }
            Endpoint::Ideal(IdealPoint::Infinity) => f64::NAN,
        }
    }
}

/// A geodesic segment, ray or line between two endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    pub start: Endpoint,
    pub end: Endpoint,
    pub line: GeodesicLine,
}

fn circle_through(x1: f64, y1: f64, x2: f64, y2: f64) -> GeodesicLine {
    let center = ((x2 * x2 + y2 * y2) - (x1 * x1 + y1 * y1)) / (2.0 * (x2 - x1));
    GeodesicLine::Circle { center, radius: (x1 - center).hypot(y1) }
}

fn same_abscissa(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs()))
}

impl Geodesic {
    /// The geodesic joining two endpoints.
    pub fn between(start: Endpoint, end: Endpoint) -> Result<Self> {
        use Endpoint::*;
        use IdealPoint::*;
        let line = match (start, end) {
            (Interior(p), Interior(q)) => {
                if p == q {
                    return Err(Error::Coincident);
                }
                if same_abscissa(p.x, q.x) {
                    GeodesicLine::Vertical { x: 0.5 * (p.x + q.x) }
                } else {
                    circle_through(p.x, p.y, q.x, q.y)
                }
            }
            (Interior(p), Ideal(Infinity)) | (Ideal(Infinity), Interior(p)) => GeodesicLine::Vertical { x: p.x },
            (Interior(p), Ideal(Finite(a))) | (Ideal(Finite(a)), Interior(p)) => {
                if same_abscissa(p.x, a) {
                    GeodesicLine::Vertical { x: a }
                } else {
                    circle_through(a, 0.0, p.x, p.y)
                }
            }
            (Ideal(Finite(a)), Ideal(Finite(b))) => {
                if a == b {
                    return Err(Error::Coincident);
                }
                GeodesicLine::Circle { center: 0.5 * (a + b), radius: 0.5 * (a - b).abs() }
            }
            (Ideal(Finite(a)), Ideal(Infinity)) | (Ideal(Infinity), Ideal(Finite(a))) => {
                GeodesicLine::Vertical { x: a }
            }
            (Ideal(Infinity), Ideal(Infinity)) => return Err(Error::Coincident),
        };
        Ok(Geodesic { start, end, line })
    }

    /// Coordinate of an endpoint along the line, `±∞` for ideal ends.
    pub fn endpoint_coordinate(&self, e: Endpoint) -> f64 {
        match e {
            Endpoint::Interior(p) => self.line.coordinate(p),
            Endpoint::Ideal(q) => {
                if q.approx_eq(self.line.positive_end(), 1e-12 * (1.0 + q.finite().unwrap_or(0.0).abs())) {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// `+1` when the coordinate increases from `start` to `end`.
    pub fn direction(&self) -> f64 {
        let s0 = self.endpoint_coordinate(self.start);
        let s1 = self.endpoint_coordinate(self.end);
        if s1 >= s0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Hyperbolic length; infinite when an end is ideal.
    pub fn length(&self) -> f64 {
        (self.endpoint_coordinate(self.end) - self.endpoint_coordinate(self.start)).abs()
    }

    /// Point at parameter `tau ∈ [0, 1]` along the segment. The parameter is
    /// the polar angle for semicircles and a monotone reparametrisation of
    /// the height for vertical lines.
    pub fn sample_param(&self, tau: f64) -> Endpoint {
        if tau <= 0.0 {
            return self.start;
        }
        if tau >= 1.0 {
            return self.end;
        }
        match self.line {
            GeodesicLine::Circle { center, radius } => {
                let t0 = self.line.angle(self.start);
                let t1 = self.line.angle(self.end);
                let t = t0 + tau * (t1 - t0);
                Endpoint::Interior(HPoint::new_unchecked(center + radius * t.cos(), radius * t.sin()))
            }
            GeodesicLine::Vertical { x } => {
                let y = match (self.start, self.end) {
                    (Endpoint::Interior(p), Endpoint::Interior(q)) => p.y * (q.y / p.y).powf(tau),
                    (Endpoint::Interior(p), Endpoint::Ideal(IdealPoint::Infinity)) => p.y / (1.0 - tau),
                    (Endpoint::Ideal(IdealPoint::Infinity), Endpoint::Interior(q)) => q.y / tau,
                    (Endpoint::Interior(p), Endpoint::Ideal(_)) => p.y * (1.0 - tau),
                    (Endpoint::Ideal(_), Endpoint::Interior(q)) => q.y * tau,
                    (Endpoint::Ideal(IdealPoint::Infinity), Endpoint::Ideal(_)) => (1.0 - tau) / tau,
                    (Endpoint::Ideal(_), Endpoint::Ideal(_)) => tau / (1.0 - tau),
                };
                Endpoint::Interior(HPoint::new_unchecked(x, y))
            }
        }
    }

    /// `n + 1` points from `start` to `end` inclusive.
    pub fn sample(&self, n: usize) -> Vec<Endpoint> {
        (0..=n).map(|k| self.sample_param(k as f64 / n as f64)).collect()
    }

    /// Unit Euclidean tangent at an interior point, oriented from `start` to `end`.
    pub fn unit_tangent(&self, p: HPoint) -> (f64, f64) {
        let sign = self.direction();
        match self.line {
            GeodesicLine::Vertical { .. } => (0.0, sign),
            GeodesicLine::Circle { center, .. } => {
                // The coordinate increases as the polar angle decreases.
                let t = p.y.atan2(p.x - center);
                (sign * t.sin(), -sign * t.cos())
            }
        }
    }

    pub fn contains(&self, p: HPoint, tol: f64) -> bool {
        self.line.euclidean_offset(p.x, p.y) <= tol
    }
}
