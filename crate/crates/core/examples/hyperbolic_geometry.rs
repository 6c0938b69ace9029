//! Geodesics, distances, horocycles and the polar chart.

use scherk::hyperbolic::{
    distance, equidistant_distance, truncated_side_length, Endpoint, Geodesic, HPoint, Horocycle, IdealPoint, Mobius,
    PolarChart,
};

fn main() -> scherk::Result<()> {
    let p = HPoint::new(0.0, 1.0)?;
    let q = HPoint::new(3.0, 2.0)?;
    let g = Geodesic::between(p.into(), q.into())?;
    println!("geodesic through {p:?} and {q:?}: {:?}", g.line);
    println!("d(p, q) = {:.12}", distance(p, q));

    let m = Mobius::new(2.0, 1.0, -1.0, 3.0)?;
    println!("after a Möbius map: d = {:.12}", distance(m.apply(p), m.apply(q)));

    // Side from the ideal point 0 to ∞, cut by horocycles of sizes 1/2 and 2.
    let h0 = Horocycle::new(IdealPoint::Finite(0.0), 0.5)?;
    let hi = Horocycle::new(IdealPoint::Infinity, 2.0)?;
    let side = truncated_side_length(
        Endpoint::Ideal(IdealPoint::Finite(0.0)),
        Endpoint::Ideal(IdealPoint::Infinity),
        Some(&h0),
        Some(&hi),
    )?;
    println!("truncated side length = {side:.12} (ln 4 = {:.12})", 4f64.ln());

    let chart = PolarChart::standard();
    let (phi, theta) = chart.from_halfplane(q)?;
    println!("polar coordinates of q: φ = {phi:.6}, θ = {theta:.6}");
    println!("equidistant {{θ = π/4}} lies at distance {:.12}", equidistant_distance(std::f64::consts::FRAC_PI_4)?);
    Ok(())
}
