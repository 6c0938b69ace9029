//! Translation-invariant constant mean curvature graphs: one family per case.

use scherk::exact::family;

fn main() -> scherk::Result<()> {
    for (h, param) in [(0.0, 0.5), (0.0, 1.0), (0.0, 2.0), (0.4, 0.3), (0.4, 0.75), (0.4, 1.5), (0.5, 0.0), (0.5, 1.0), (1.0, 0.5)]
    {
        let f = family(h, param)?;
        println!("H = {h}, parameter = {param}: case {}", f.case.label());
        for c in &f.components {
            let mid = 0.5 * (c.theta_lo + c.theta_hi);
            println!(
                "  θ in [{:.6}, {:.6}], ends {:?}/{:?}, f({mid:.4}) = {:.6}, f' = {:.6}",
                c.theta_lo,
                c.theta_hi,
                c.lower,
                c.upper,
                c.value(mid)?,
                c.derivative(mid)
            );
        }
    }
    Ok(())
}
