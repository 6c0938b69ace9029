//! `report.json`, `timings.json` and the CSV tables.
//!
//! Reports hold no clock readings, paths or thread counts, so equal inputs
//! give byte-identical files. Wall-clock times go to `timings.json`.

use crate::error::Result;
use crate::exact::CmcFamily;
use crate::lab::FluxResult;
use crate::solver::sci;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// SHA-256 of the input file, when there is one.
    pub input_sha256: Option<String>,
    pub seed: u64,
    pub exit_status: i32,
    pub errors: Vec<String>,
    pub payload: serde_json::Value,
}

impl RunReport {
    pub fn new(command: &str, input: Option<&[u8]>, seed: u64) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            input_sha256: input.map(sha256_hex),
            seed,
            exit_status: 0,
            errors: Vec::new(),
            payload: serde_json::Value::Null,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        Ok(())
    }
}

/// Wall-clock seconds per phase.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub threads: usize,
    pub phases: Vec<(String, f64)>,
}

impl Timings {
    pub fn record(&mut self, phase: &str, start: std::time::Instant) {
        self.phases.push((phase.to_string(), start.elapsed().as_secs_f64()));
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut s = serde_json::to_string_pretty(self).expect("timings always serialize");
        s.push('\n');
        std::fs::write(dir.join("timings.json"), s)?;
        Ok(())
    }
}

/// `arc,value,arc_length,error_estimate,normal`.
pub fn write_flux_csv(mut w: impl Write, rows: &[FluxResult]) -> std::io::Result<()> {
    writeln!(w, "arc,value,arc_length,error_estimate,normal")?;
    for r in rows {
        let normal = match r.normal {
            crate::lab::Normal::Right => "right",
            crate::lab::Normal::Left => "left",
        };
        let arc = r.arc.replace(',', ";");
        writeln!(w, "{arc},{},{},{},{normal}", sci(r.value), sci(r.arc_length), sci(r.error_estimate))?;
    }
    Ok(())
}

/// Profile table `component,theta,f,fprime` under `#` lines naming the case,
/// the interior interval ends `theta1 < theta2 < ...` and each component. Infinite derivatives print as `inf`.
pub fn write_profile_csv(mut w: impl Write, family: &CmcFamily, samples: usize) -> Result<()> {
    let mut ends: Vec<f64> = family
        .components
        .iter()
        .flat_map(|c| [c.theta_lo, c.theta_hi])
        .filter(|t| *t > 0.0 && *t < std::f64::consts::PI)
        .collect();
    ends.sort_by(f64::total_cmp);
    ends.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut head = format!("# case={}", family.case.label());
    for (i, t) in ends.iter().enumerate() {
        head += &format!(", theta{}={t:.10}", i + 1);
    }
    writeln!(w, "{head}")?;
    writeln!(w, "# H={}", sci(family.h))?;
    writeln!(w, "# param={}", sci(family.param))?;
    for (i, c) in family.components.iter().enumerate() {
        writeln!(
            w,
            "# component {i}: theta in [{:.10}, {:.10}], ends {:?}/{:?}",
            c.theta_lo, c.theta_hi, c.lower, c.upper
        )?;
    }
    writeln!(w, "component,theta,f,fprime")?;
    for (i, c) in family.components.iter().enumerate() {
        for (t, f, d) in c.sample(samples)? {
            let d = if d.is_finite() { sci(d) } else if d > 0.0 { "inf".into() } else { "-inf".into() };
            writeln!(w, "{i},{},{},{d}", sci(t), sci(f))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
