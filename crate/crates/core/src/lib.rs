//! Exact K-theoretic descendent series of Hilbert schemes of points on
//! surfaces, computed by torus localization and cross-checked against
//! modified Macdonald polynomial identities.

pub mod algebra;
pub mod error;
pub mod hilb_c2;
pub mod macdonald;
pub mod partitions;
pub mod symfunc;
pub mod toric;
pub mod verify;

pub use error::{Error, Result};
