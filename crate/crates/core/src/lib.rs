//! Finite combinatorics for countable Boolean rings with distinguished ideals:
//! PO systems and their set algebras, classification tuples, the measure
//! calculus on compact opens, and finite-depth Stone space models.

pub mod algebra;
pub mod canon;
pub mod classification;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod measures;
pub mod posystem;
pub mod report;
pub mod stone;
pub mod subset;

pub use algebra::{generate_algebra, AlgebraKind, SetAlgebra};
pub use error::{Error, Result};
pub use posystem::POSystem;
pub use subset::Subset;
