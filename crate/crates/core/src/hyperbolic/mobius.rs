use super::point::{Endpoint, HPoint, IdealPoint};
use crate::error::{Error, Result};

/// An orientation-preserving isometry `z ↦ (az + b)/(cz + d)` with real
/// coefficients and `ad - bc > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::Misconfiguration(format!("Möbius determinant {det} is not positive")));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// `z ↦ z + t`.
    pub fn translation(t: f64) -> Self {
        Mobius { a: 1.0, b: t, c: 0.0, d: 1.0 }
    }

    /// `z ↦ k z` with `k > 0`.
    pub fn dilation(k: f64) -> Self {
        Mobius { a: k, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// Sends `p ↦ 0` and `q ↦ ∞` for distinct ideal points.
    pub fn normalizing(p: IdealPoint, q: IdealPoint) -> Result<Self> {
        match (p, q) {
            (IdealPoint::Finite(p), IdealPoint::Finite(q)) => {
                if p == q {
                    return Err(Error::Coincident);
                }
                let s = (p - q).signum();
                Mobius::new(s, -s * p, 1.0, -q)
            }
            (IdealPoint::Finite(p), IdealPoint::Infinity) => Ok(Mobius::translation(-p)),
            (IdealPoint::Infinity, IdealPoint::Finite(q)) => Mobius::new(0.0, -1.0, 1.0, -q),
            (IdealPoint::Infinity, IdealPoint::Infinity) => Err(Error::Coincident),
        }
    }

    pub fn inverse(&self) -> Self {
        Mobius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Self {
        Mobius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn apply(&self, p: HPoint) -> HPoint {
        let nr = self.a * p.x + self.b;
        let ni = self.a * p.y;
        let dr = self.c * p.x + self.d;
        let di = self.c * p.y;
        let den = dr * dr + di * di;
        HPoint::new_unchecked((nr * dr + ni * di) / den, self.det() * p.y / den)
    }

    pub fn apply_ideal(&self, p: IdealPoint) -> IdealPoint {
        match p {
            IdealPoint::Infinity => {
                if self.c == 0.0 {
                    IdealPoint::Infinity
                } else {
                    IdealPoint::Finite(self.a / self.c)
                }
            }
            IdealPoint::Finite(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    IdealPoint::Infinity
                } else {
                    IdealPoint::Finite((self.a * x + self.b) / den)
                }
            }
        }
    }

    pub fn apply_endpoint(&self, e: Endpoint) -> Endpoint {
        match e {
            Endpoint::Interior(p) => Endpoint::Interior(self.apply(p)),
            Endpoint::Ideal(p) => Endpoint::Ideal(self.apply_ideal(p)),
        }
    }

    /// Multiplier `|dw/dz| = det/|cz + d|²`, used to map Euclidean sizes.
    pub fn derivative_modulus(&self, p: HPoint) -> f64 {
        let dr = self.c * p.x + self.d;
        let di = self.c * p.y;
        self.det() / (dr * dr + di * di)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizing_sends_points_to_zero_and_infinity() {
        for (p, q) in [(1.0, 3.0), (3.0, -1.0), (-2.0, 0.5)] {
            let m = Mobius::normalizing(IdealPoint::Finite(p), IdealPoint::Finite(q)).unwrap();
            assert!(m.apply_ideal(IdealPoint::Finite(p)).approx_eq(IdealPoint::Finite(0.0), 1e-12));
            assert_eq!(m.apply_ideal(IdealPoint::Finite(q)), IdealPoint::Infinity);
            assert!(m.det() > 0.0);
        }
    }

    #[test]
    fn inverse_round_trips() {
        let m = Mobius::new(2.0, 1.0, 1.0, 3.0).unwrap();
        let p = HPoint::new(0.3, 1.7).unwrap();
        let q = m.inverse().apply(m.apply(p));
        assert!(p.euclidean_distance(&q) < 1e-12);
    }
}
