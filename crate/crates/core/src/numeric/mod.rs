//! Floating-point evaluation of the Weierstrass σ-function of the lattice
//! `Z(1-i) + Z(1+i)` from its canonical product, used to cross-check the
//! exact certification.
//!
//! The product is truncated to the square `max(|p|,|q|) <= N`. Because the
//! truncation is invariant under multiplication by `i`, the cubic terms of
//! the omitted factors cancel and the relative error of the truncated
//! product is at most `e^b - 1` with `b = |z|^4 / (4 N^2 (1 - ρ^4))`,
//! `ρ = |z| / (√2 N)`.

mod matrix;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::LatticeIndex;

pub use matrix::{eigenvalues, lattice_hints, numeric_sigma_of_matrix, MatrixSigmaReport, SigmaMethod};

pub type ComplexFloat = num::complex::Complex64;

/// Distance from `λ` below which `σ_λ` drops the vanishing factor instead of dividing.
pub const SWITCH_RADIUS: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationParams {
    /// Keep lattice points with `max(|p|,|q|) <= radius`.
    pub radius: u32,
    /// Allowed error, relative to `max(1, |value|)`.
    pub target_tol: f64,
}

impl TruncationParams {
    pub fn new(radius: u32, target_tol: f64) -> Result<Self> {
        if radius == 0 {
            return Err(Error::InvalidProfile("truncation radius must be at least 1".into()));
        }
        if !target_tol.is_finite() || target_tol <= 0.0 {
            return Err(Error::NonFinite);
        }
        Ok(TruncationParams { radius, target_tol })
    }

    /// `|z| <= N/4`.
    pub fn reliability_radius(&self) -> f64 {
        self.radius as f64 / 4.0
    }

    /// Bound on the relative error of the truncated product at modulus `r`.
    pub fn relative_error_bound(&self, r: f64) -> f64 {
        let n = self.radius as f64;
        let rho = r / (std::f64::consts::SQRT_2 * n);
        let b = r.powi(4) / (4.0 * n * n * (1.0 - rho.powi(4)));
        b.exp_m1()
    }
}

impl Default for TruncationParams {
    fn default() -> Self {
        TruncationParams {
            radius: 40,
            target_tol: 0.05,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SigmaValue {
    #[serde(serialize_with = "serialize_complex")]
    pub value: ComplexFloat,
    /// Bound on `|σ(z) - value|`.
    pub error_estimate: f64,
}

fn serialize_complex<S: serde::Serializer>(z: &ComplexFloat, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

type Factors = Arc<Vec<(LatticeIndex, ComplexFloat)>>;

/// Nonzero lattice points of the truncation, sorted by modulus.
pub(crate) fn lattice_points(radius: u32) -> Factors {
    static CACHE: OnceLock<Mutex<HashMap<u32, Factors>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("lattice cache poisoned");
    guard
        .entry(radius)
        .or_insert_with(|| {
            let r = radius as i64;
            let mut pts = Vec::with_capacity(((2 * r + 1) * (2 * r + 1)) as usize);
            for p in -r..=r {
                for q in -r..=r {
                    if p != 0 || q != 0 {
                        pts.push((LatticeIndex::new(p, q), ComplexFloat::new((p + q) as f64, (q - p) as f64)));
                    }
                }
            }
            pts.sort_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()).then(a.0.cmp(&b.0)));
            Arc::new(pts)
        })
        .clone()
}

fn check_finite(z: ComplexFloat) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn finish(value: ComplexFloat, z: ComplexFloat, params: &TruncationParams) -> Result<SigmaValue> {
    check_finite(value)?;
    let error_estimate = value.norm() * params.relative_error_bound(z.norm());
    let allowed = params.target_tol * value.norm().max(1.0);
    if error_estimate > allowed {
        return Err(Error::TruncationInsufficient {
            estimate: error_estimate,
            tolerance: allowed,
        });
    }
    Ok(SigmaValue { value, error_estimate })
}

fn check_radius(z: ComplexFloat, params: &TruncationParams) -> Result<()> {
    check_finite(z)?;
    if z.norm() > params.reliability_radius() {
        return Err(Error::TruncationInsufficient {
            estimate: params.relative_error_bound(z.norm().min(params.radius as f64)),
            tolerance: params.target_tol,
        });
    }
    Ok(())
}

/// `(1 - u) exp(u + u^2/2)` with `u = z/λ`.
fn factor(z: ComplexFloat, lambda: ComplexFloat) -> ComplexFloat {
    let u = z / lambda;
    (1.0 - u) * (u + 0.5 * u * u).exp()
}

/// The truncated product `z ∏ (1 - z/λ) exp(z/λ + (z/λ)^2/2)`.
pub fn sigma_eval(z: ComplexFloat, params: &TruncationParams) -> Result<SigmaValue> {
    check_radius(z, params)?;
    let mut acc = z;
    for (_, lambda) in lattice_points(params.radius).iter() {
        acc *= factor(z, *lambda);
    }
    finish(acc, z, params)
}

/// `σ_λ(z) = σ(z) / (z - λ)`.
///
/// Within [`SWITCH_RADIUS`] of `λ` the linear factor `1 - z/λ` is dropped
/// and replaced by `-1/λ`, so the removable singularity costs no accuracy.
pub fn sigma_lambda_eval(z: ComplexFloat, idx: LatticeIndex, params: &TruncationParams) -> Result<SigmaValue> {
    check_radius(z, params)?;
    let (lp, lq) = (idx.p, idx.q);
    let lambda = ComplexFloat::new((lp + lq) as f64, (lq - lp) as f64);
    if (z - lambda).norm() >= SWITCH_RADIUS {
        let s = sigma_eval(z, params)?;
        return finish(s.value / (z - lambda), z, params);
    }
    let r = params.radius as i64;
    if lp.abs() > r || lq.abs() > r {
        return Err(Error::TruncationInsufficient {
            estimate: f64::INFINITY,
            tolerance: params.target_tol,
        });
    }
    let mut acc = if idx == LatticeIndex::new(0, 0) {
        ComplexFloat::new(1.0, 0.0)
    } else {
        z
    };
    for (other, mu) in lattice_points(params.radius).iter() {
        if *other == idx {
            let u = z / mu;
            acc *= -(u + 0.5 * u * u).exp() / mu;
        } else {
            acc *= factor(z, *mu);
        }
    }
    finish(acc, z, params)
}

/// `σ'(λ_{p,q}) = σ_{p,q}(λ_{p,q})`.
pub fn sigma_prime_at(idx: LatticeIndex, params: &TruncationParams) -> Result<SigmaValue> {
    let lambda = ComplexFloat::new((idx.p + idx.q) as f64, (idx.q - idx.p) as f64);
    sigma_lambda_eval(lambda, idx, params)
}
