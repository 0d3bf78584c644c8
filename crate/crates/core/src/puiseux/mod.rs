//! Puiseux series over the coefficient fields, and lazily refined
//! generators for the elements under study.

pub mod lazy;
pub mod series;

pub use lazy::{DeclaredType, LazySeries, PcsRule};
pub use series::PuiseuxSeries;
