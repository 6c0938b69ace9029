//! Reads a JSON domain file, reports its verdict and writes it back out in
//! normalized form.
//!
//! cargo run --example domain_file -- crates/core/examples/data/pentagon.json

use scherk::domain::check;
use scherk::io::{read_domain_file, DomainFile};
use std::path::PathBuf;

fn main() -> scherk::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data/triangle.json"));
    let parsed = read_domain_file(&path)?;
    let d = &parsed.domain;
    println!("{}: {} vertices, {} components", path.display(), d.vertex_count(), d.components.len());
    println!("verdict: {:?}", check(d)?.kind);
    for a in &parsed.arcs {
        println!("arc {} ({:?} normal)", a.name, a.normal);
    }
    print!("{}", DomainFile::from_domain(d).to_json());
    Ok(())
}
