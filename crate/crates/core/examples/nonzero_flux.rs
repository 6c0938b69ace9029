//! Annular domain whose graph has non-zero flux around the hole, compared
//! with the symmetric configuration where the flux vanishes.

use scherk::lab::{experiment_nonzero_flux, NonzeroFluxConfig};

fn main() -> scherk::Result<()> {
    for cfg in [NonzeroFluxConfig::default(), NonzeroFluxConfig::symmetric()] {
        let r = experiment_nonzero_flux(&cfg)?;
        println!("a = {}:", cfg.a);
        for n in &r.notes {
            println!("  {n}");
        }
        r.write_csv(std::io::stdout())?;
        for c in &r.checks {
            println!("  {}: {} ({})", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail);
        }
    }
    Ok(())
}
