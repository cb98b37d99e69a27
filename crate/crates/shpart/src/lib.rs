//! Exact computations around shifted partials, projected partials and
//! sum-of-products decompositions of low-depth and unique-parse-tree formulas.

pub mod algebra;
pub mod decompose;
mod error;
pub mod formula;
pub mod hardpolys;
pub mod harness;
pub mod measures;
pub mod random;

pub use error::{Error, Result};
