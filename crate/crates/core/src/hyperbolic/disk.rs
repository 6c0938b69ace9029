//! Conversions between the Poincaré disk and the upper half-plane through
//! the Cayley map `z = i(1 + w)/(1 - w)`.

use super::horocycle::Horocycle;
use super::point::{Endpoint, HPoint, IdealPoint};
use crate::error::{Error, Result};

/// Maps a point of the closed disk to the half-plane. `w = 1` goes to `∞`.
pub fn to_halfplane(u: f64, v: f64) -> Result<Endpoint> {
    let r2 = u * u + v * v;
    if r2 > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("({u}, {v}) lies outside the disk")));
    }
    if (r2 - 1.0).abs() <= 1e-12 {
        return Ok(Endpoint::Ideal(ideal_from_angle(v.atan2(u))));
    }
    let den = (1.0 - u).powi(2) + v * v;
    Ok(Endpoint::Interior(HPoint::new(-2.0 * v / den, (1.0 - r2) / den)?))
}

/// Ideal point for the boundary angle `φ`: `e^{iφ} ↦ -cot(φ/2)`.
pub fn ideal_from_angle(phi: f64) -> IdealPoint {
    let half = 0.5 * phi.rem_euclid(std::f64::consts::TAU);
    if half == 0.0 {
        IdealPoint::Infinity
    } else {
        IdealPoint::Finite(-half.cos() / half.sin())
    }
}

/// Boundary angle in `[0, 2π)` of an ideal point.
pub fn angle_from_ideal(p: IdealPoint) -> f64 {
    match p {
        IdealPoint::Infinity => 0.0,
        IdealPoint::Finite(x) => (2.0 * 1.0f64.atan2(-x)).rem_euclid(std::f64::consts::TAU),
    }
}

/// Maps a half-plane point to the open disk.
pub fn from_halfplane(p: HPoint) -> (f64, f64) {
    let den = p.x * p.x + (p.y + 1.0).powi(2);
    ((p.x * p.x + p.y * p.y - 1.0) / den, -2.0 * p.x / den)
}

/// Maps any endpoint to the closed disk.
pub fn endpoint_to_disk(e: Endpoint) -> (f64, f64) {
    match e {
        Endpoint::Interior(p) => from_halfplane(p),
        Endpoint::Ideal(q) => {
            let phi = angle_from_ideal(q);
            (phi.cos(), phi.sin())
        }
    }
}

/// Converts a disk horocycle at angle `φ` with Euclidean diameter `s` into
/// the half-plane convention.
pub fn horocycle_from_disk(phi: f64, diameter: f64) -> Result<Horocycle> {
    if !(diameter > 0.0 && diameter < 2.0) {
        return Err(Error::Misconfiguration(format!("disk horocycle diameter {diameter} is not in (0, 2)")));
    }
    let k = 1.0 - diameter;
    let far = to_halfplane(k * phi.cos(), k * phi.sin())?;
    let Endpoint::Interior(p) = far else {
        return Err(Error::Domain("horocycle apex on the boundary".into()));
    };
    match ideal_from_angle(phi) {
        IdealPoint::Infinity => Horocycle::new(IdealPoint::Infinity, p.y),
        IdealPoint::Finite(a) => Horocycle::new(IdealPoint::Finite(a), ((p.x - a).powi(2) + p.y * p.y) / p.y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_round_trip() {
        let p = HPoint::new(0.4, 2.3).unwrap();
        let (u, v) = from_halfplane(p);
        let Endpoint::Interior(q) = to_halfplane(u, v).unwrap() else { panic!() };
        assert!(p.euclidean_distance(&q) < 1e-12);
    }

    #[test]
    fn angles_round_trip() {
        for phi in [0.3, 1.0, 2.5, 4.0, 6.0] {
            let back = angle_from_ideal(ideal_from_angle(phi));
            assert!((back - phi).abs() < 1e-12);
        }
        assert!(ideal_from_angle(std::f64::consts::FRAC_PI_2).approx_eq(IdealPoint::Finite(-1.0), 1e-12));
    }
}
