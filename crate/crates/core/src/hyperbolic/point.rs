use crate::error::{Error, Result};
use std::fmt;

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("non-finite coordinates ({x}, {y})")));
        }
        if y <= 0.0 {
            return Err(Error::Domain(format!("y = {y} is not positive")));
        }
        Ok(Self { x, y })
    }

    /// Builds a point without checking `y > 0`. The caller guarantees it.
    pub const fn new_unchecked(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn euclidean_distance(&self, other: &HPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A point of the ideal boundary `ℝ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IdealPoint {
    Finite(f64),
    Infinity,
}

impl IdealPoint {
    pub fn finite(self) -> Option<f64> {
        match self {
            IdealPoint::Finite(a) => Some(a),
            IdealPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, IdealPoint::Infinity)
    }

    /// Equality up to an absolute tolerance on finite coordinates.
    pub fn approx_eq(self, other: IdealPoint, tol: f64) -> bool {
        match (self, other) {
            (IdealPoint::Infinity, IdealPoint::Infinity) => true,
            (IdealPoint::Finite(a), IdealPoint::Finite(b)) => (a - b).abs() <= tol,
            _ => false,
        }
    }
}

impl fmt::Display for IdealPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealPoint::Finite(a) => write!(f, "{a}"),
            IdealPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Either an interior point or an ideal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Interior(HPoint),
    Ideal(IdealPoint),
}

impl Endpoint {
    pub fn is_ideal(&self) -> bool {
        matches!(self, Endpoint::Ideal(_))
    }

    pub fn ideal(&self) -> Option<IdealPoint> {
        match self {
            Endpoint::Ideal(p) => Some(*p),
            Endpoint::Interior(_) => None,
        }
    }

    /// Euclidean position in the closed half-plane, `None` at `∞`.
    pub fn position(&self) -> Option<(f64, f64)> {
        match self {
            Endpoint::Interior(p) => Some((p.x, p.y)),
            Endpoint::Ideal(IdealPoint::Finite(a)) => Some((*a, 0.0)),
            Endpoint::Ideal(IdealPoint::Infinity) => None,
        }
    }

    pub fn approx_eq(&self, other: &Endpoint, tol: f64) -> bool {
        match (self, other) {
            (Endpoint::Interior(p), Endpoint::Interior(q)) => p.euclidean_distance(q) <= tol,
            (Endpoint::Ideal(a), Endpoint::Ideal(b)) => a.approx_eq(*b, tol),
            _ => false,
        }
    }
}

impl From<HPoint> for Endpoint {
    fn from(p: HPoint) -> Self {
        Endpoint::Interior(p)
    }
}

impl From<IdealPoint> for Endpoint {
    fn from(p: IdealPoint) -> Self {
        Endpoint::Ideal(p)
    }
}
