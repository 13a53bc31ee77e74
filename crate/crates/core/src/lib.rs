//! Exact arithmetic for complex Hadamard matrices.
//!
//! Matrices with unimodular entries are kept in log form: every entry is a
//! rational phase `q` standing for `exp(2*pi*i*q)`, optionally shifted by an
//! integer combination of free real parameters (an affine family). All
//! structural decisions (orthogonality, equivalence, invariants) are made in
//! exact rational arithmetic; floating point appears only when a family is
//! evaluated at a concrete parameter point or when an input leaves the range
//! where exact reduction is practical.

pub mod error;
pub mod phase;
pub mod cyclotomic;
pub mod linalg;
pub mod matrix;
pub mod equivalence;
pub mod io;
pub mod catalogue;
pub mod invariants;
pub mod dita;
pub mod affine;
pub mod conference;

pub use error::{Error, Result};
pub use matrix::{AffinePhaseMatrix, Evaluated, HadamardMatrix, NumericMatrix};
pub use phase::{AffineEntry, LinearForm, RationalPhase};
