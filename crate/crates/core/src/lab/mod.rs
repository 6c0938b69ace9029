//! Flux measurements, the flux-property suite and the two experiments on
//! non-zero flux and non-uniqueness.

pub mod flux;
pub mod nonuniqueness;
pub mod nonzero_flux;
pub mod report;
pub mod verify;

pub use flux::{discrete_flux, flux_exact, ChartCurve, ExactField, FluxResult, Normal};
pub use nonuniqueness::{experiment_nonuniqueness, w0_symmetry, NonuniquenessConfig};
pub use nonzero_flux::{experiment_nonzero_flux, NonzeroFluxConfig};
pub use report::{Check, ExperimentReport, Row};
pub use verify::{extrapolate_to_zero, verify_flux_lemmas, EdgeProbe, FluxSubject, LemmaSample, LemmaTolerances};
