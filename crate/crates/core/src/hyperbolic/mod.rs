//! Geometry of the hyperbolic plane in the upper half-plane model.
//!
//! Points are `HPoint`s with `y > 0`; ideal points are real numbers or `∞`.
//! The Poincaré disk is reachable through [`disk`], and the polar chart
//! used for domains bounded by equidistant curves lives in [`chart`].

pub mod chart;
pub mod disk;
pub mod geodesic;
pub mod horocycle;
pub mod length;
pub mod mobius;
pub mod point;

pub use chart::PolarChart;
pub use geodesic::{Geodesic, GeodesicLine};
pub use horocycle::Horocycle;
pub use length::{arc_length, distance, equidistant_distance, truncated_side_length};
pub use mobius::Mobius;
pub use point::{Endpoint, HPoint, IdealPoint};
