//! Toric surfaces: fixed-point data, classes, the `t → 1` limit, closed-form
//! checks and the universal-series solve.

pub mod classes;
pub mod closed_forms;
pub mod limit;
pub mod surface;
pub mod universal;
pub mod zsurface;

pub use classes::{parse_bundle, ClassChern, EqClassS};
pub use limit::{limit_along, limit_t_one};
pub use surface::{Divisor, FixedPoint, ToricSurface};
pub use zsurface::{z_surface, z_surface_checked, SurfaceSeries};
pub use universal::{default_configs, universal_extract, ChernData, UniversalConfig, UniversalFactorization};
