//! Flux gap between the solutions with +∞ and -∞ top data on strips of
//! ideal rectangles of increasing depth.

use scherk::lab::{experiment_nonuniqueness, w0_symmetry, NonuniquenessConfig};

fn main() -> scherk::Result<()> {
    let cfg = NonuniquenessConfig::default();
    let (_, dphi, dtheta) = w0_symmetry(cfg.alpha, cfg.h, 16.0)?;
    println!("single rectangle: reflection defects {dphi:.2e} and {dtheta:.2e}");
    let r = experiment_nonuniqueness(&cfg)?;
    r.write_csv(std::io::stdout())?;
    for c in &r.checks {
        println!("{}: {} ({})", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail);
    }
    Ok(())
}
