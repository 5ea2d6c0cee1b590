//! Invariant lattices of Schur modules under `GL(n, R)` over a discretely
//! valued field.
//!
//! The pipeline: build the Schur module `S_λ(V)` on its semistandard tableau
//! basis ([`schur`]), evaluate the representation exactly, saturate the
//! `R`-span of its image into an order `H` ([`dvr`]), and determine the
//! homothety classes of `H`-stable lattices in the Bruhat–Tits building by two
//! independent methods ([`building`]). [`gaussian`] reads the result as a
//! statement about invariant Gaussian measures on local fields.

#![allow(clippy::wrong_self_convention)]

pub mod building;
pub mod dvr;
pub mod error;
pub mod field;
pub mod gaussian;
pub mod generators;
pub mod matrix;
pub mod residue_linalg;
pub mod schur;
pub mod tableau;

pub use dvr::{compute_order, Lattice, LatticeClass, MatrixModule, OrderOptions};
pub use error::{Error, Result};
pub use field::{AnyField, FieldSpec, LaurentField, PAdicRationals, Valuation, ValuedField};
pub use matrix::Matrix;
pub use schur::{Realization, SchurModule};
pub use tableau::{Partition, SemistandardTableau};
