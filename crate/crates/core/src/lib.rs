pub mod algebra;
pub mod cli;
pub mod error;
pub mod extension;
pub mod galois;
pub mod keyseq;
pub mod newton;
pub mod parse;
pub mod puiseux;
pub mod values;

pub use error::{Error, Result};
pub use values::Value;
