//! Existence verdicts for the bundled fixtures, with the truncation table
//! of the deciding polygon.

use scherk::domain::{check, enumerate_polygons, fixtures, truncation_table, EnumerationLimits, ScherkDomain};

fn report(name: &str, d: &ScherkDomain) -> scherk::Result<()> {
    let v = check(d)?;
    println!("{name}: {:?} under {:?}, {} polygons", v.kind, v.theorem, v.polygons_checked);
    let tightest = &v.checks[0];
    println!(
        "  tightest {}: alpha = {:.6}, beta = {:.6}, gamma = {:.6}, slack = {:.6}",
        tightest.polygon,
        tightest.alpha,
        tightest.beta,
        tightest.gamma,
        tightest.slack()
    );
    let polygons = enumerate_polygons(d, &EnumerationLimits::default())?;
    if let Some(p) = polygons.iter().find(|p| p.vertices == tightest.vertices) {
        for r in truncation_table(d, p, &[1, 2, 3])? {
            println!("    n = {}: alpha - beta = {:.9}, gamma = {:.6}", r.generation, r.alpha - r.beta, r.gamma);
        }
    }
    Ok(())
}

fn main() -> scherk::Result<()> {
    report("triangle", &fixtures::triangle()?)?;
    report("quadrilateral", &fixtures::quadrilateral()?)?;
    report("pentagon", &fixtures::pentagon()?)?;
    report("ideal square", &fixtures::ideal_square(0.2)?)?;
    report("annulus", &fixtures::annulus(1.2, (0.1, 1.0), 0.1, [2.0, 0.6, 0.6, 0.6])?)?;
    Ok(())
}
