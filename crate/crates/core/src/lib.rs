//! Exact verification of distorted monoidal structure on graded vector spaces.

pub mod distortion;
pub mod error;
pub mod exactlin;
pub mod harness;
pub mod laxfun;
pub mod report;
pub mod route;
pub mod transform;
pub mod twist;

pub use error::{Error, Result};
