//! Closed-form solutions used as oracles and barriers.

pub mod barrier;
pub mod cmc;

pub use barrier::Barrier;
pub use cmc::{family, CmcCase, CmcFamily, CmcProfile, EndBehavior};
