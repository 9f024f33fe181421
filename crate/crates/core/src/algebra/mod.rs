//! Exact arithmetic: rationals, Laurent polynomials and rational functions
//! in `t1, t2`, and truncated multivariate series.

pub mod coeff;
pub mod gcd;
pub mod laurent;
pub mod modp;
pub mod ratfunc;
pub mod rational;
pub mod series;
pub mod zpoly;

pub use coeff::Coefficient;
pub use laurent::{MonomialMap, TLaurent, TMonomial};
pub use ratfunc::{ratfunc_reduce, RatFunc};
pub use rational::Rational;
pub use series::{MultiSeries, TotalCap, Truncation};
