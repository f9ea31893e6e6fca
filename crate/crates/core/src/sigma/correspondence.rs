use std::collections::BTreeMap;



use super::operator::{certify_with_spectrum, SigmaOperator};
use super::pseudo_real::{check_pseudo_real, PseudoRealityMode};
use crate::error::{Error, Result};
use crate::hodge::{
    deligne_splitting, validate_mhs, BiGrading, HodgeFiltration, MixedHodgeStructure, ValidationReport, WeightFiltration,
};
use crate::linalg::{GaussianRational, LatticeIndex, Matrix, Subspace, Vector};

/// The filtrations an operator induces through its eigenspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorFiltrations {
    /// `W_n = ⊕_{p+q<=n} I^{p,q}_A`; not necessarily real.
    pub weight: WeightFiltration,
    /// `F^p = ⊕_{k>=p} I^{k,q}_A`.
    pub hodge: HodgeFiltration,
    /// `D_{p,q} = ⊕_{k<=p, l<=q} I^{k,l}_A` on the square spanned by the
    /// spectrum indices. Outside it `D` is zero or constant along rows.
    pub bifiltration: BTreeMap<LatticeIndex, Subspace>,
}

pub fn operator_filtrations(op: &SigmaOperator) -> OperatorFiltrations {
    let bg = op.bigrading();
    let n = op.dim();
    let weight = match bg.weight_bounds() {
        Some((lo, hi)) => (lo..=hi).map(|k| (k, bg.weight_step(k))).collect(),
        None => Vec::new(),
    };
    let hodge = match bg.p_bounds() {
        Some((lo, hi)) => (lo..=hi).map(|p| (p, bg.hodge_step(p))).collect(),
        None => Vec::new(),
    };
    let mut bifiltration = BTreeMap::new();
    if let Some((lo, hi)) = bg.index_bounds() {
        for p in lo..=hi {
            for q in lo..=hi {
                bifiltration.insert(LatticeIndex::new(p, q), bg.bifiltration(p, q));
            }
        }
    }
    OperatorFiltrations {
        weight: WeightFiltration::new(n, weight).expect("steps share the ambient dimension"),
        hodge: HodgeFiltration::new(n, hodge).expect("steps share the ambient dimension"),
        bifiltration,
    }
}

/// The operator acting as `λ_{p,q}` on each piece `I^{p,q}` of the Deligne splitting.
///
/// The result is certified and checked to be strongly pseudo-real; a failure
/// of either check is an [`Error::Internal`].
pub fn operator_from_mhs(mhs: &MixedHodgeStructure) -> Result<SigmaOperator> {
    let bg = deligne_splitting(mhs)?;
    let matrix = operator_of_bigrading(&bg)?;
    let op = certify_with_spectrum(&matrix, bg.pieces().keys().copied())
        .map_err(|e| Error::Internal(format!("constructed operator failed certification: {e}")))?;
    if op.spectrum() != bg.pieces() {
        return Err(Error::Internal("eigenspaces differ from the splitting".into()));
    }
    let verdict = check_pseudo_real(&op, PseudoRealityMode::Strong);
    if !verdict.holds {
        return Err(Error::Internal(format!(
            "constructed operator is not strongly pseudo-real: {:?}",
            verdict.witnesses
        )));
    }
    Ok(op)
}

/// The matrix acting as `λ_{p,q}` on each piece of a direct-sum bigrading.
pub fn operator_of_bigrading(bg: &BiGrading) -> Result<Matrix> {
    bg.check_direct_sum()?;
    let n = bg.ambient_dim();
    let mut columns: Vec<Vector> = Vec::with_capacity(n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (idx, piece) in bg.pieces() {
        for v in piece.vectors() {
            columns.push(v);
            eigenvalues.push(idx.embed());
        }
    }
    let basis = Matrix::from_columns(n, &columns)?;
    let inverse = basis.inverse()?;
    basis.try_mul(&Matrix::diagonal(&eigenvalues))?.try_mul(&inverse)
}

/// A mixed Hodge structure read off an operator, with its validation report.
#[derive(Clone, Debug)]
pub struct OperatorMhs {
    pub mhs: MixedHodgeStructure,
    pub report: ValidationReport,
}

/// The pair `(W^A, F^A)` of a weakly pseudo-real σ-operator.
///
/// For operators that are weak but not strong the inverse direction does
/// not recover `op`: distinct operators can share the same structure.
pub fn mhs_from_operator(op: &SigmaOperator) -> Result<OperatorMhs> {
    check_pseudo_real(op, PseudoRealityMode::Weak).into_result()?;
    let filtrations = operator_filtrations(op);
    if filtrations.weight.steps().any(|(_, s)| !s.is_real()) {
        return Err(Error::NotReal);
    }
    let report = validate_mhs(&filtrations.weight, &filtrations.hodge)?;
    if !report.passed() {
        return Err(Error::InvalidMhs(Box::new(report)));
    }
    let mhs = MixedHodgeStructure::from_checked(filtrations.weight, filtrations.hodge);
    Ok(OperatorMhs { mhs, report })
}

/// The correction `u'` with `x + u' ∈ conj I^{q,p}_A` for `x ∈ I^{p,q}_A`.
///
/// Solves `(λ_{p,q} - conj A) u' = u` inside `D_{p-1,q-1}`, where
/// `u = conj(A) x - λ_{p,q} x`. Needs `op` strongly pseudo-real.
pub fn conj_correction(op: &SigmaOperator, idx: LatticeIndex, x: &[GaussianRational]) -> Result<Vector> {
    let n = op.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    check_pseudo_real(op, PseudoRealityMode::Strong).into_result()?;
    if !op.eigenspace(idx).contains_vector(x)? {
        return Err(Error::NotInEigenspace(idx));
    }
    let lambda = idx.embed();
    let conj_a = op.matrix().conj();
    let u: Vector = conj_a
        .mul_vec(x)
        .into_iter()
        .zip(x)
        .map(|(ax, xi)| &ax - &(&lambda * xi))
        .collect();
    let lower = op.bigrading().bifiltration(idx.p - 1, idx.q - 1);
    if !lower.contains_vector(&u)? {
        return Err(Error::Internal(format!("u is not in D_{{p-1,q-1}} at {idx}")));
    }
    let shifted = &Matrix::scalar(n, &lambda) - &conj_a;
    let system = shifted.try_mul(lower.basis())?;
    if system.rank() != lower.dim() {
        return Err(Error::SingularRestriction(idx));
    }
    let coeffs = system
        .solve(&u)
        .ok_or_else(|| Error::Internal("correction system is inconsistent".into()))?;
    let u_prime = lower.basis().mul_vec(&coeffs);
    let moved: Vector = x.iter().zip(&u_prime).map(|(a, b)| a + b).collect();
    if !op.eigenspace(idx.swapped()).conj().contains_vector(&moved)? {
        return Err(Error::Internal(format!("x + u' is not in conj I^{}", idx.swapped())));
    }
    Ok(u_prime)
}
