//! Exact coefficient fields, polynomials, factorization and extensions.

pub mod ext;
pub mod factor;
pub mod field;
pub mod matrix;
pub mod poly;

pub use ext::{adjoin_root, min_poly_over, root_of_unity, Adjoined};
pub use factor::{factor_univariate, is_irreducible, nth_root_in_field, roots_in_field, squarefree_decomposition};
pub use field::{Elem, FieldKind, GroundField};
pub use matrix::Ring;
pub use poly::UPoly;
