use nalgebra::DMatrix;
use serde::Serialize;

use super::{lattice_points, sigma_eval, ComplexFloat, TruncationParams};
use crate::error::{Error, Result};
use crate::linalg::{LatticeIndex, Matrix};

/// Eigenbasis condition number above which a result is flagged.
const CONDITION_LIMIT: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMethod {
    /// `V diag(σ(μ_k)) V^{-1}` from a numerical eigenbasis.
    Eigenbasis,
    /// `A ∏ (I - A/λ)`, used when no eigenbasis was found.
    DirectProduct,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixSigmaReport {
    /// Frobenius norm of `σ(A)`.
    pub norm: f64,
    pub method: SigmaMethod,
    /// Condition number of the eigenbasis, when one was found.
    pub condition: Option<f64>,
    pub ill_conditioned: bool,
}

fn to_float(m: &Matrix) -> Result<DMatrix<ComplexFloat>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (re, im) = m[(i, j)].to_f64_pair();
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::NonFinite);
            }
            out[(i, j)] = ComplexFloat::new(re, im);
        }
    }
    Ok(out)
}

fn schur_eigenvalues(a: &DMatrix<ComplexFloat>) -> Vec<ComplexFloat> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let (_, t) = nalgebra::Schur::new(a.clone()).unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Floating-point eigenvalues of `m` from a complex Schur form.
pub fn eigenvalues(m: &Matrix) -> Result<Vec<ComplexFloat>> {
    Ok(schur_eigenvalues(&to_float(m)?))
}

/// Lattice points within distance one of some numerical eigenvalue.
pub fn lattice_hints(m: &Matrix) -> Result<Vec<LatticeIndex>> {
    let mut out = Vec::new();
    for mu in eigenvalues(m)? {
        let (a0, b0) = (mu.re.floor() as i64, mu.im.floor() as i64);
        for a in a0 - 1..=a0 + 2 {
            for b in b0 - 1..=b0 + 2 {
                let d = ComplexFloat::new(a as f64, b as f64) - mu;
                if (a + b) % 2 == 0 && d.norm() <= 1.0 {
                    out.push(LatticeIndex::new((a - b) / 2, (a + b) / 2));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Group eigenvalues that agree to within `tol`.
fn clusters(values: &[ComplexFloat], tol: f64) -> Vec<(ComplexFloat, usize)> {
    let mut groups: Vec<Vec<ComplexFloat>> = Vec::new();
    for &v in values {
        match groups.iter_mut().find(|g| g.iter().any(|w| (w - v).norm() <= tol)) {
            Some(g) => g.push(v),
            None => groups.push(vec![v]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let k = g.len();
            (g.iter().sum::<ComplexFloat>() / k as f64, k)
        })
        .collect()
}

/// Orthonormal basis of the numerical kernel, as columns.
fn null_space(m: &DMatrix<ComplexFloat>, tol: f64) -> Vec<nalgebra::DVector<ComplexFloat>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol)
        .map(|(k, _)| v_t.row(k).transpose().map(|x| x.conj()))
        .collect()
}

fn condition_number(v: &DMatrix<ComplexFloat>) -> f64 {
    let s = v.clone().singular_values();
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn direct_product(a: &DMatrix<ComplexFloat>, params: &TruncationParams) -> DMatrix<ComplexFloat> {
    // The exponential factors multiply to exp(A Σ1/λ + A^2 Σ1/(2λ^2)) = I
    // over the rotation-invariant truncation.
    let n = a.nrows();
    let id = DMatrix::<ComplexFloat>::identity(n, n);
    let mut acc = a.clone();
    for (_, lambda) in lattice_points(params.radius).iter() {
        acc = &acc * (&id - a / *lambda);
    }
    acc
}

/// Numerical `σ(A)` and its Frobenius norm.
///
/// Diagonalizes `A` numerically and evaluates σ on the eigenvalues. When
/// some eigenvalue cluster has a deficient kernel no eigenbasis exists and
/// the truncated product is applied to `A` directly. A condition number
/// above `1e8` sets `ill_conditioned`; the norm is still returned.
pub fn numeric_sigma_of_matrix(m: &Matrix, params: &TruncationParams) -> Result<MatrixSigmaReport> {
    let a = to_float(m)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(MatrixSigmaReport {
            norm: 0.0,
            method: SigmaMethod::Eigenbasis,
            condition: Some(1.0),
            ill_conditioned: false,
        });
    }
    let scale = a.norm().max(1.0);
    let values = schur_eigenvalues(&a);
    let mut columns = Vec::with_capacity(n);
    let mut sigmas = Vec::with_capacity(n);
    let mut complete = true;
    for (mu, mult) in clusters(&values, 1e-6 * scale) {
        let shifted = &a - DMatrix::<ComplexFloat>::identity(n, n) * mu;
        let kernel = null_space(&shifted, 1e-7 * scale);
        if kernel.len() != mult {
            complete = false;
            break;
        }
        let s = sigma_eval(mu, params)?.value;
        for v in kernel {
            columns.push(v);
            sigmas.push(s);
        }
    }
    if complete {
        let v = DMatrix::from_columns(&columns);
        let condition = condition_number(&v);
        if let Some(v_inv) = v.clone().try_inverse() {
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(sigmas));
            let result = &v * d * v_inv;
            return Ok(MatrixSigmaReport {
                norm: result.norm(),
                method: SigmaMethod::Eigenbasis,
                condition: Some(condition),
                // NaN counts as ill-conditioned.
                ill_conditioned: condition.is_nan() || condition > CONDITION_LIMIT,
            });
        }
    }
    for mu in &values {
        // Same contract as the scalar evaluation.
        if mu.norm() > params.reliability_radius() {
            return Err(Error::TruncationInsufficient {
                estimate: params.relative_error_bound(mu.norm().min(params.radius as f64)),
                tolerance: params.target_tol,
            });
        }
    }
    let result = direct_product(&a, params);
    let norm = result.norm();
    if !norm.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(MatrixSigmaReport {
        norm,
        method: SigmaMethod::DirectProduct,
        condition: None,
        ill_conditioned: false,
    })
}
