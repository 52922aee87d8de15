//! Exact homological algebra of Cartier and Frobenius modules over
//! finite-dimensional commutative `F_p`-algebras.

pub mod algebra;
pub mod cartier;
pub mod catalog;
pub mod complexes;
pub mod derived_checks;
pub mod error;
pub mod free_monad;
pub mod les;
pub mod perverse;
pub mod linalg;
pub mod oracle;
pub mod sample;
pub mod suite;
pub mod subquotient;

pub use error::{Error, Result};
