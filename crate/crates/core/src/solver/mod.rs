//! Finite-difference Dirichlet solver for minimal graphs over conformal grids.

mod banded;
pub mod divergence;
mod energy;
pub mod grid;
mod newton;
pub mod sequence;
mod solution;

pub use banded::{BandedSpd, Cholesky, NotPositiveDefinite};
pub use energy::AreaFunctional;
pub use grid::{Chart, ConformalGrid, FnRegion, GridSpec, NodeKind, PolygonRegion, Region};
pub use newton::{harmonic_guess, solve_dirichlet, SolveFailure, SolverOptions};
pub use solution::{residual, sci, DiscreteSolution};
pub use sequence::{run_truncation_sequence, ProbeSummary, SequenceConfig, SequenceLevel, TruncationSequence};
pub use divergence::{detect_divergence_lines, DivergenceConfig, DivergenceLineCandidate};
