//! Finite computations around substitutive subshifts and their profinite
//! invariants: factor sets, return words, extension graphs, free-group
//! subgroups, transition monoids, bifix group codes and pseudoword evaluation
//! in finite monoids.

pub mod arith;
pub mod bifix;
pub mod episturmian;
pub mod error;
pub mod extension;
pub mod factors;
pub mod freegroup;
pub mod monoid;
pub mod returns;
pub mod shadow;
pub mod substitution;
pub mod words;

pub use error::{Error, Result};
pub use factors::{FactorSet, FactorSource};
pub use substitution::Substitution;
pub use words::{Alphabet, Budget, Letter, Word};
