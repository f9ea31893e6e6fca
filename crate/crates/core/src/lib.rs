//! Exact mixed Hodge structures, Deligne splittings and pseudo-real
//! σ-operators for the lattice `Z(1-i) + Z(1+i)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`linalg`]: exact scalars in `Q(i)`, matrices and canonical subspaces;
//! * [`hodge`]: filtrations, validation of mixed Hodge structures and the
//!   Deligne splitting;
//! * [`sigma`]: certification of σ-operators, eigenprojectors, weak and
//!   strong pseudo-reality and the two-way correspondence with mixed Hodge
//!   structures;
//! * [`numeric`]: floating-point evaluation of the Weierstrass σ-function as
//!   an independent cross-check;
//! * [`generator`]: seeded random instances for property testing;
//! * [`batch`]: data-parallel evaluation of independent instances.

pub mod batch;
pub mod error;
pub mod generator;
pub mod hodge;
pub mod linalg;
pub mod numeric;
pub mod sigma;

pub use error::{Error, Result};
