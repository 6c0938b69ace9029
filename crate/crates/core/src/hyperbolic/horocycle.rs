use super::geodesic::{Geodesic, GeodesicLine};
use super::point::{HPoint, IdealPoint};
use crate::error::{Error, Result};

/// A horocycle with its ideal center. `size` is the Euclidean diameter for a
/// finite center and the height of the horizontal line for the center `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horocycle {
    pub center: IdealPoint,
    pub size: f64,
}

impl Horocycle {
    pub fn new(center: IdealPoint, size: f64) -> Result<Self> {
        if !(size > 0.0) || !size.is_finite() {
            return Err(Error::Misconfiguration(format!("horocycle size {size} must be positive")));
        }
        if let IdealPoint::Finite(a) = center {
            if !a.is_finite() {
                return Err(Error::Domain("horocycle center is not finite".into()));
            }
        }
        Ok(Self { center, size })
    }

    /// The nested horocycle whose horodisk is scaled by `factor ≤ 1`.
    pub fn shrunk(&self, factor: f64) -> Horocycle {
        let size = match self.center {
            IdealPoint::Finite(_) => self.size * factor,
            IdealPoint::Infinity => self.size / factor,
        };
        Horocycle { center: self.center, size }
    }

    /// Generation `n ≥ 1` of the nested family starting at `self`.
    pub fn generation(&self, n: u32) -> Horocycle {
        self.shrunk(0.5f64.powi(n as i32 - 1))
    }

    /// Whether `p` lies strictly inside the horodisk.
    pub fn contains(&self, p: HPoint) -> bool {
        match self.center {
            IdealPoint::Finite(a) => (p.x - a).powi(2) + p.y * p.y < self.size * p.y,
            IdealPoint::Infinity => p.y > self.size,
        }
    }

    /// Signed distance between two horocycles; positive when disjoint.
    pub fn distance_to(&self, other: &Horocycle) -> Result<f64> {
        match (self.center, other.center) {
            (IdealPoint::Finite(a), IdealPoint::Finite(b)) => {
                if a == b {
                    return Err(Error::Coincident);
                }
                Ok(((a - b).powi(2) / (self.size * other.size)).ln())
            }
            (IdealPoint::Finite(_), IdealPoint::Infinity) => Ok((other.size / self.size).ln()),
            (IdealPoint::Infinity, IdealPoint::Finite(_)) => Ok((self.size / other.size).ln()),
            (IdealPoint::Infinity, IdealPoint::Infinity) => Err(Error::Coincident),
        }
    }

    pub fn disjoint(&self, other: &Horocycle) -> bool {
        self.distance_to(other).map(|d| d > 0.0).unwrap_or(false)
    }

    /// The single point where the horocycle meets a geodesic ending at its
    /// center, or the point of tangency with a semicircle below `∞`.
    pub fn intersect_geodesic(&self, g: &Geodesic) -> Result<HPoint> {
        let near = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs());
        match (self.center, g.line) {
            (IdealPoint::Infinity, GeodesicLine::Vertical { x }) => Ok(HPoint::new_unchecked(x, self.size)),
            (IdealPoint::Finite(a), GeodesicLine::Vertical { x }) if near(a, x) => {
                Ok(HPoint::new_unchecked(a, self.size))
            }
            (IdealPoint::Finite(a), GeodesicLine::Circle { center, radius })
                if near(a, center + radius) || near(a, center - radius) =>
            {
                let s = self.size;
                let e = (center - a).signum();
                let y = 4.0 * radius * radius * s / (4.0 * radius * radius + s * s);
                Ok(HPoint::new_unchecked(a + e * s * y / (2.0 * radius), y))
            }
            // A semicircle touching the horizontal line at its top.
            (IdealPoint::Infinity, GeodesicLine::Circle { center, radius }) if near(radius, self.size) => {
                Ok(HPoint::new_unchecked(center, radius))
            }
            _ => Err(Error::Misconfiguration("geodesic does not end at the horocycle center".into())),
        }
    }

    /// Euclidean circle `(center_x, center_y, radius)` for a finite center.
    pub fn euclidean_circle(&self) -> Option<(f64, f64, f64)> {
        self.center.finite().map(|a| (a, 0.5 * self.size, 0.5 * self.size))
    }
}
