//! Certified approximations for maximum cut and fractional cut covering
//! built on the Goemans–Williamson SDP and its gauge dual.

pub mod certificates;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod instances;
pub mod linalg;
pub mod oracles;
pub mod par;
pub mod rng;
pub mod rounding;
pub mod sdp;

pub use error::{Error, Result};
