//! File formats: the JSON domain file, run reports and CSV tables.

pub mod domain_file;
pub mod report;

pub use domain_file::{
    parse_domain, read_domain_file, ArcSpec, DataSpec, DomainFile, EdgeSpec, ExperimentBlock, HorocycleSpec, IdealSpec,
    Model, NamedArc, ParsedDomain, SolverBlock, VertexSpec, SCHEMA_VERSION,
};
pub use report::{sha256_hex, write_flux_csv, write_profile_csv, RunReport, Timings};
