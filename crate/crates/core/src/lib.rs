//! Exact Hankel determinants for weighted lattice-path sequences.
//!
//! The crate generates the path-counting sequences defined by
//! `F = 1 + t x^ℓ F + x^2 F^2`, evaluates their (shifted) Hankel
//! determinants exactly, and runs the continued-fraction transformation on
//! quadratic functional equations to discover determinant recurrences. A
//! brute-force nonintersecting path-tuple enumerator serves as an independent
//! oracle for the determinant side.

pub mod error;
pub mod exactalg;

pub use error::{CanonicalizeError, Error, Result};
pub mod matrix;
pub mod pathcount;
pub mod hankel;
pub mod gx;
pub mod verify;
