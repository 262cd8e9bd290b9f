//! Weighted geodesics and least-gradient solutions on the unit disk.

pub mod analysis;
pub mod error;
pub mod geodesy;
pub mod geometry;
pub mod lattice;
pub mod oracle;
pub mod stacker;
pub mod weight;

pub use error::{Error, Result};
pub use geometry::Point;
pub use weight::WeightField;
