//! Jenkins-Serrin domains: boundary description, structural checks,
//! inscribed polygons and the existence conditions.

pub mod fixtures;
pub mod inscribed;
pub mod model;
pub mod region;
pub mod truncation;
pub mod validate;
pub mod verdict;

pub use inscribed::{enumerate_polygons, EnumerationLimits, InscribedPolygon, Side, SideKind};
pub use model::{BoundaryData, Edge, EdgeKind, ScherkDomain};
pub use region::{truncated_boundary, BoundarySample, BoundaryTag, TruncatedBoundary};
pub use truncation::{edge_totals, truncation_table, TruncationRow};
pub use validate::{validate, Diagnostic, Rule};
pub use verdict::{check, check_theorem1, check_theorem2, check_theorem3, PolygonCheck, Theorem, Verdict, VerdictKind};

/// Tolerance separating strict inequalities from equalities.
pub const TOL_STRICT: f64 = 1e-7;
