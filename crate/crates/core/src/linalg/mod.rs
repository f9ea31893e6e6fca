//! Exact linear algebra over the Gaussian rationals.
//!
//! No floating point is used anywhere in this module: rank decisions in the
//! filtration algebra must be exact.

mod gaussian;
mod lattice;
mod matrix;
mod subspace;

pub use gaussian::{format_rational, parse_rational, GaussianRational, Rational};
pub use lattice::{in_lattice, LatticeIndex};
pub use matrix::{Matrix, Vector};
pub use subspace::Subspace;
