//! Locates the geodesic along which the truncated solutions on the pentagon
//! blow up.

use scherk::domain::{check, fixtures};
use scherk::solver::{detect_divergence_lines, run_truncation_sequence, DivergenceConfig, SequenceConfig};

fn main() -> scherk::Result<()> {
    let d = fixtures::pentagon()?;
    let v = check(&d)?;
    if let Some(w) = &v.witness {
        println!("witness {}: 2 alpha = {:.6} >= gamma = {:.6}", w.polygon, 2.0 * w.alpha, w.gamma);
    }
    let seq = run_truncation_sequence(&d, &SequenceConfig::default())?;
    for c in detect_divergence_lines(&seq, &d, &DivergenceConfig::default())? {
        println!(
            "candidate {} ({:.5}, {:.5}) from {:?} to {:?}, residual {:.4}, score {:.3}",
            c.geodesic.0, c.geodesic.1, c.geodesic.2, c.start_vertex, c.end_vertex, c.residual, c.score
        );
    }
    Ok(())
}
