//! Finite models of Tate cohomology, Galois-module constructions and
//! hypercohomology of two-term lattice complexes.

pub mod cli;
pub mod complexes;
pub mod error;
pub mod galois;
pub mod rigid;
pub mod suite;
pub mod tate;
pub mod znf;

pub use error::{Error, Result};
