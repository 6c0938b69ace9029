//! The truncated ladder u_m on a domain that satisfies the conditions and on
//! one that does not: probe values settle in the first case and grow with m
//! in the second.

use scherk::domain::fixtures;
use scherk::solver::{run_truncation_sequence, SequenceConfig};

fn main() -> scherk::Result<()> {
    for (name, d, probe) in [
        ("triangle", fixtures::triangle()?, (0.3, 1.7)),
        ("quadrilateral", fixtures::quadrilateral()?, (0.5, 1.8)),
    ] {
        let probes = vec![probe];
        let cfg = SequenceConfig { probes: probes.clone(), ..Default::default() };
        let seq = run_truncation_sequence(&d, &cfg)?;
        println!("{name}:");
        for l in &seq.levels {
            println!("  m = {:>4}: u{probe:?} = {:.6} ({} Newton steps)", l.level, l.probe_values[0].unwrap_or(f64::NAN), l.solution.iterations);
        }
        let p = &seq.probe_summaries(&probes)[0];
        println!("  Cauchy: {}, slopes {:.4?}", p.is_cauchy(1e-3), p.slopes);
    }
    Ok(())
}
