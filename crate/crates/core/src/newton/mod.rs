//! Polynomials over `K`, Newton polygons and Puiseux roots.

pub mod polygon;
pub mod roots;
pub mod spoly;

pub use polygon::{NewtonPolygon, Segment};
pub use roots::{puiseux_roots, PuiseuxRoot, RootBundle, RootMode};
pub use spoly::SeriesPoly;
