//! Filtrations, mixed Hodge structures and the Deligne splitting.

mod bigrading;
mod filtration;
mod report;
mod splitting;
mod validate;

pub use bigrading::{bigrading_to_filtrations, hodge_numbers, BiGrading};
pub use filtration::{real_basis_of_weight, HodgeFiltration, MixedHodgeStructure, WeightFiltration};
pub use report::{Check, ValidationReport};
pub use splitting::{deligne_splitting, verify_splitting};
pub use validate::validate_mhs;
