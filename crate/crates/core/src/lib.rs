//! Minimal graphs with infinite boundary values over domains of the
//! hyperbolic plane: geometry, existence checks, exact solutions, a discrete
//! solver and flux experiments.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod domain;
pub mod error;
pub mod exact;
pub mod hyperbolic;
pub mod io;
pub mod lab;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result, SchemaIssue};
