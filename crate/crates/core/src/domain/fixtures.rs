//! Reference domains used by the examples, tests and experiments.

use super::model::{Edge, EdgeKind, ScherkDomain};
use crate::error::Result;
use crate::hyperbolic::disk::{horocycle_from_disk, ideal_from_angle};
use crate::hyperbolic::{Endpoint, HPoint, Horocycle, IdealPoint, Mobius};
use std::f64::consts::FRAC_PI_4;

fn pt(x: f64, y: f64) -> Endpoint {
    Endpoint::Interior(HPoint::new_unchecked(x, y))
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

fn ring(kinds: &[EdgeKind], offset: usize) -> Vec<Edge> {
    let n = kinds.len();
    kinds.iter().enumerate().map(|(i, k)| Edge::new(*k, offset + i, offset + (i + 1) % n)).collect()
}

/// Triangle `(0, 1), (0, e), (1, 2)` with `+∞` on the vertical side (of
/// length `1`) and `0` on the other two. The `A` side is shorter than the
/// sum of the others.
pub fn triangle() -> Result<ScherkDomain> {
    use EdgeKind::*;
    let e = std::f64::consts::E;
    ScherkDomain::new(vec![pt(0.0, 1.0), pt(0.0, e), pt(1.0, 2.0)], names(3), vec![ring(&[A, C, C], 0)], vec![None; 3])
}

/// Height of the top side of [`quadrilateral`]: the vertical sides have length `1.2`.
pub fn quad_top() -> f64 {
    1.2f64.exp()
}

/// Geodesic quadrilateral with `+∞` on both vertical sides `x = 0` and
/// `x = 1` (length `1.2` each) and `0` on the top and bottom sides. The
/// domain itself violates `2α < γ`.
pub fn quadrilateral() -> Result<ScherkDomain> {
    use EdgeKind::*;
    let y = quad_top();
    ScherkDomain::new(
        vec![pt(0.0, 1.0), pt(1.0, 1.0), pt(1.0, y), pt(0.0, y)],
        names(4),
        vec![ring(&[C, A, C, A], 0)],
        vec![None; 4],
    )
}

/// [`quadrilateral`] with an extra vertex `(1/2, 3/10)` below its bottom
/// side, moved by an isometry that makes that side's geodesic the line
/// `x = 0`. The domain satisfies `2α < γ` but the quadrilateral
/// `v1 v2 v3 v4` does not, so the chord `v1 v2` is where the truncated
/// solutions blow up.
pub fn pentagon() -> Result<ScherkDomain> {
    use EdgeKind::*;
    let y = quad_top();
    let d = ScherkDomain::new(
        vec![pt(0.0, 1.0), pt(1.0, 1.0), pt(1.0, y), pt(0.0, y), pt(0.5, 0.3)],
        names(5),
        vec![vec![
            Edge::new(A, 1, 2),
            Edge::new(C, 2, 3),
            Edge::new(A, 3, 0),
            Edge::new(C, 0, 4),
            Edge::new(C, 4, 1),
        ]],
        vec![None; 5],
    )?;
    // The chord is the semicircle of radius √5/2 about 1/2; send its left end to ∞.
    let left = 0.5 - 1.25f64.sqrt();
    let right = 0.5 + 1.25f64.sqrt();
    let shift = 1.0 / (right - left);
    let m = Mobius::dilation(4.0)
        .compose(&Mobius::translation(shift))
        .compose(&Mobius::new(0.0, -1.0, 1.0, -left)?);
    d.transformed(&m)
}

/// Ideal quadrilateral with vertices at disk angles `π/4 + kπ/2` and kinds
/// `A, B, A, B`, each vertex carrying a disk horocycle of Euclidean
/// diameter `diameter`.
pub fn ideal_square(diameter: f64) -> Result<ScherkDomain> {
    use EdgeKind::*;
    let angles: Vec<f64> = (0..4).map(|k| FRAC_PI_4 + k as f64 * 2.0 * FRAC_PI_4).collect();
    let vertices = angles.iter().map(|a| Endpoint::Ideal(ideal_from_angle(*a))).collect();
    let horocycles = angles.iter().map(|a| horocycle_from_disk(*a, diameter).map(Some)).collect::<Result<_>>()?;
    ScherkDomain::new(vertices, names(4), vec![ring(&[A, B, A, B], 0)], horocycles)
}

/// Ideal quadrilateral `-1, 0, a, ∞` with kinds `A, B, A, B` starting from
/// the side `(∞, -1)`, and a geodesic square hole with `0` data centred at
/// `center` with half-width `half` (Euclidean, in the half-plane). For
/// `a = 1` the outer sides pair up by the reflection `x ↦ -x`; in general
/// `α - β = 2 ln a` for every horocycle choice.
pub fn annulus(a: f64, center: (f64, f64), half: f64, sizes: [f64; 4]) -> Result<ScherkDomain> {
    use EdgeKind::*;
    let ideal = [IdealPoint::Infinity, IdealPoint::Finite(-1.0), IdealPoint::Finite(0.0), IdealPoint::Finite(a)];
    let mut vertices: Vec<Endpoint> = ideal.iter().map(|p| Endpoint::Ideal(*p)).collect();
    let (cx, cy) = center;
    vertices.extend([pt(cx - half, cy - half), pt(cx + half, cy - half), pt(cx + half, cy + half), pt(cx - half, cy + half)]);
    let horocycles = ideal
        .iter()
        .zip(sizes)
        .map(|(p, s)| Horocycle::new(*p, s).map(Some))
        .chain((0..4).map(|_| Ok(None)))
        .collect::<Result<Vec<_>>>()?;
    ScherkDomain::new(
        vertices,
        vec!["inf", "m1", "o", "a", "h1", "h2", "h3", "h4"].into_iter().map(String::from).collect(),
        vec![ring(&[A, B, A, B], 0), ring(&[C, C, C, C], 4)],
        horocycles,
    )
}
