//! σ-operators: certification, pseudo-reality and the correspondence with
//! mixed Hodge structures.

mod correspondence;
mod operator;
mod pseudo_real;

pub use correspondence::{
    conj_correction, mhs_from_operator, operator_filtrations, operator_from_mhs, operator_of_bigrading,
    OperatorFiltrations,
    OperatorMhs,
};
pub use operator::{
    certify_sigma_operator, certify_with_spectrum, projector, CandidateSource, Certificate, SigmaOperator,
};
pub use pseudo_real::{
    check_pseudo_real, strongly_equivalent, weakly_equivalent, PseudoRealityMode, PseudoRealityVerdict,
    Witness,
};
