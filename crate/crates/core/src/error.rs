use std::collections::BTreeMap;

use crate::hodge::ValidationReport;
use crate::linalg::LatticeIndex;
use crate::sigma::{PseudoRealityMode, Witness};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a matrix failed sigma-operator certification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumDeficit {
    /// Lattice eigenvalues found, with the dimension of each eigenspace.
    pub found: BTreeMap<LatticeIndex, usize>,
    /// `n` minus the total eigenspace dimension.
    pub deficit: usize,
    /// Lattice eigenvalues whose algebraic multiplicity exceeds the geometric one.
    pub defective: Vec<LatticeIndex>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("{0} is not a point of the lattice Z(1-i)+Z(1+i)")]
    NotInLattice(String),

    #[error("duplicate {0}")]
    DuplicateIndex(String),

    #[error("mixed Hodge structure has not been validated")]
    NotValidated,

    #[error("not a mixed Hodge structure: {}", .0.failures().join("; "))]
    InvalidMhs(Box<ValidationReport>),

    #[error("pieces do not form a direct sum: total dimension {dim_sum}, span dimension {span_dim}, ambient {ambient_dim}")]
    NotDirectSum {
        dim_sum: usize,
        span_dim: usize,
        ambient_dim: usize,
    },

    #[error("weight filtration is not real: W_{index} differs from its conjugate")]
    NotRealWeight { index: i64 },

    #[error("subspace is not stable under conjugation")]
    NotReal,

    #[error("not a sigma-operator: {}", describe_deficit(.0))]
    NotSigmaOperator(Box<SpectrumDeficit>),

    #[error("operator is not {mode} pseudo-real ({} witness pairs)", .witnesses.len())]
    NotPseudoReal {
        mode: PseudoRealityMode,
        witnesses: Vec<Witness>,
    },

    #[error("vector is not in the eigenspace {0}")]
    NotInEigenspace(LatticeIndex),

    #[error("restricted correction system is singular at {0}")]
    SingularRestriction(LatticeIndex),

    #[error("truncation insufficient: error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    TruncationInsufficient { estimate: f64, tolerance: f64 },

    #[error("Gershgorin search region too large ({candidates} lattice points)")]
    SearchTooLarge { candidates: u128 },

    #[error("non-finite floating point input")]
    NonFinite,

    #[error("invalid generator profile: {0}")]
    InvalidProfile(String),

    #[error("gave up after {attempts} attempts: {what}")]
    ExhaustedRetries { attempts: usize, what: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn describe_deficit(d: &SpectrumDeficit) -> String {
    let mut s = format!("deficit {}", d.deficit);
    if !d.defective.is_empty() {
        let at: Vec<String> = d
            .defective
            .iter()
            .map(|idx| format!("λ={}", idx.embed()))
            .collect();
        s.push_str(&format!(" at {}", at.join(", ")));
    }
    s
}
