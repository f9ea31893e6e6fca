//! Exact certification of σ-operators.
//!
//! The Weierstrass σ-function of the lattice has simple zeros exactly at the
//! lattice points, so `σ(A) = 0` holds iff `A` is semisimple with every
//! eigenvalue in the lattice. Certification enumerates the lattice points
//! allowed by a rational Gershgorin bound, keeps the exact roots of the
//! characteristic polynomial, and checks that the eigenspaces fill the space.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result, SpectrumDeficit};
use crate::hodge::BiGrading;
use crate::linalg::{GaussianRational, LatticeIndex, Matrix, Rational, Subspace};

/// Upper bound on enumerated lattice candidates before giving up.
const MAX_CANDIDATES: u128 = 50_000_000;

/// Where the candidate eigenvalues came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSource {
    /// Every lattice point in the row and column regions.
    Gershgorin,
    /// Floating-point eigenvalues rounded to nearby lattice points.
    NumericHint,
    /// Supplied by the caller.
    Supplied,
}

/// How a [`SigmaOperator`] was certified.
///
/// Whatever the candidate source, success means the exact eigenspaces at the
/// candidates have dimensions summing to `n`, which proves semisimplicity
/// with lattice spectrum on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub source: CandidateSource,
    /// Row radii `R_i = Σ_{j≠i} (|re a_ij| + |im a_ij|)`.
    #[serde(serialize_with = "serialize_rationals")]
    pub gershgorin_radii: Vec<Rational>,
    /// Lattice points inside the row and column regions.
    pub candidates_examined: usize,
    /// Candidates that are roots of the characteristic polynomial.
    pub roots_found: usize,
    /// Dimension of each eigenspace; these sum to the ambient dimension.
    pub eigenspace_dims: BTreeMap<LatticeIndex, usize>,
}

fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// A square matrix over `Q(i)` certified to satisfy `σ(A) = 0`, together
/// with its eigenspace decomposition and eigenprojectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaOperator {
    matrix: Matrix,
    spectrum: BTreeMap<LatticeIndex, Subspace>,
    projectors: BTreeMap<LatticeIndex, Matrix>,
    certificate: Certificate,
}

impl SigmaOperator {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Eigenspaces `I^{p,q}_A`, keyed by the lattice index of the eigenvalue.
    pub fn spectrum(&self) -> &BTreeMap<LatticeIndex, Subspace> {
        &self.spectrum
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn eigenspace(&self, idx: LatticeIndex) -> Subspace {
        self.spectrum
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.dim()))
    }

    /// Projector onto `I^{p,q}_A` along the other eigenspaces; zero off the spectrum.
    pub fn projector(&self, idx: LatticeIndex) -> Matrix {
        self.projectors
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(), self.dim()))
    }

    pub(crate) fn projectors(&self) -> &BTreeMap<LatticeIndex, Matrix> {
        &self.projectors
    }

    /// The eigenspace decomposition as a bigrading.
    pub fn bigrading(&self) -> BiGrading {
        BiGrading::new(self.dim(), self.spectrum.clone()).expect("eigenspaces share the ambient dimension")
    }

    /// The conjugate operator, whose eigenspace at `(q,p)` is `conj I^{p,q}_A`.
    pub fn conj(&self) -> SigmaOperator {
        SigmaOperator {
            matrix: self.matrix.conj(),
            spectrum: self
                .spectrum
                .iter()
                .map(|(idx, s)| (idx.swapped(), s.conj()))
                .collect(),
            projectors: self
                .projectors
                .iter()
                .map(|(idx, p)| (idx.swapped(), p.conj()))
                .collect(),
            certificate: Certificate {
                source: self.certificate.source,
                gershgorin_radii: self.certificate.gershgorin_radii.clone(),
                candidates_examined: self.certificate.candidates_examined,
                roots_found: self.certificate.roots_found,
                eigenspace_dims: self
                    .certificate
                    .eigenspace_dims
                    .iter()
                    .map(|(idx, d)| (idx.swapped(), *d))
                    .collect(),
            },
        }
    }

    fn from_parts(
        matrix: Matrix,
        spectrum: BTreeMap<LatticeIndex, Subspace>,
        certificate: Certificate,
    ) -> Result<Self> {
        let n = matrix.rows();
        let mut columns = Vec::with_capacity(n);
        let mut ranges = Vec::with_capacity(spectrum.len());
        for (idx, space) in &spectrum {
            let start = columns.len();
            columns.extend(space.vectors());
            ranges.push((*idx, start, columns.len()));
        }
        let basis = Matrix::from_columns(n, &columns)?;
        let inverse = basis.inverse()?;
        let mut projectors = BTreeMap::new();
        for (idx, start, end) in ranges {
            let left = Matrix::from_columns(n, &columns[start..end])?;
            let right = Matrix::from_rows((start..end).map(|r| inverse.row(r).to_vec()).collect())?;
            let right = if right.rows() == 0 { Matrix::zeros(0, n) } else { right };
            projectors.insert(idx, left.try_mul(&right)?);
        }
        Ok(SigmaOperator {
            matrix,
            spectrum,
            projectors,
            certificate,
        })
    }
}

fn row_radii(m: &Matrix) -> Vec<Rational> {
    let n = m.rows();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| m[(i, j)].l1_modulus())
                .fold(Rational::zero(), |a, b| a + b)
        })
        .collect()
}

fn check_square(m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

/// Certify `m` as a σ-operator or explain why it is not one.
///
/// Candidates are the lattice points `λ` with `m1(λ - a_ii)^2 <= 2 R_i^2`
/// for some row `i` (and likewise for some column), where `m1` is the l1
/// modulus. When that region holds more than fifty million points the
/// floating-point eigenvalues are rounded to lattice points instead; a
/// success on that path is still exact, a failure is reported as
/// [`Error::SearchTooLarge`].
pub fn certify_sigma_operator(m: &Matrix) -> Result<SigmaOperator> {
    check_square(m)?;
    let n = m.rows();
    let radii = row_radii(m);
    let col_radii = row_radii(&m.transpose());
    let row_discs: Vec<Disc> = (0..n).map(|i| Disc::new(&m[(i, i)], &radii[i])).collect();
    let col_discs: Vec<Disc> = (0..n).map(|j| Disc::new(&m[(j, j)], &col_radii[j])).collect();

    let total = row_discs.iter().fold(0u128, |acc, d| acc.saturating_add(d.box_size()));
    if total > MAX_CANDIDATES {
        let hints = crate::numeric::lattice_hints(m)?;
        return match certify_at(m, hints, CandidateSource::NumericHint, radii) {
            Ok(op) => Ok(op),
            Err(Error::NotSigmaOperator(_)) => Err(Error::SearchTooLarge { candidates: total }),
            Err(e) => Err(e),
        };
    }

    let charpoly = characteristic_polynomial(m);
    let modular = ModularPoly::new(&charpoly);
    let mut candidates = BTreeSet::new();
    for disc in &row_discs {
        let (a_lo, a_hi, b_lo, b_hi) = disc.bounding_box();
        for a in a_lo..=a_hi {
            for b in b_lo..=b_hi {
                if (a + b).is_odd() || !disc.contains(a, b) {
                    continue;
                }
                if col_discs.iter().any(|d| d.contains(a, b)) {
                    candidates.insert((a, b));
                }
            }
        }
    }
    let examined = candidates.len();
    let roots = candidates.into_iter().filter(|&(a, b)| {
        // The modular residue is a cheap proof of non-vanishing.
        modular.vanishes_at(a, b) && poly_eval(&charpoly, &GaussianRational::from_ints(a, b)).is_zero()
    });
    let roots: Vec<LatticeIndex> = roots
        .map(|(a, b)| LatticeIndex::decode(&GaussianRational::from_ints(a, b)))
        .collect::<Result<_>>()?;
    let mut op = certify_at(m, roots, CandidateSource::Gershgorin, radii);
    if let Err(Error::NotSigmaOperator(d)) = &mut op {
        d.defective = d
            .found
            .iter()
            .filter(|(idx, dim)| root_multiplicity(&charpoly, &idx.embed()) > **dim)
            .map(|(idx, _)| *idx)
            .collect();
    }
    op.map(|mut op| {
        op.certificate.candidates_examined = examined;
        op
    })
}

/// Certify `m` using only the given candidate eigenvalues.
///
/// A success is a full certificate. On failure the reported deficit is
/// relative to the candidates: eigenvalues outside the list are not
/// searched for, and `defective` is left empty.
pub fn certify_with_spectrum(
    m: &Matrix,
    candidates: impl IntoIterator<Item = LatticeIndex>,
) -> Result<SigmaOperator> {
    check_square(m)?;
    let radii = row_radii(m);
    certify_at(m, candidates, CandidateSource::Supplied, radii)
}

fn certify_at(
    m: &Matrix,
    candidates: impl IntoIterator<Item = LatticeIndex>,
    source: CandidateSource,
    radii: Vec<Rational>,
) -> Result<SigmaOperator> {
    let n = m.rows();
    let candidates: BTreeSet<LatticeIndex> = candidates.into_iter().collect();
    let examined = candidates.len();
    let mut spectrum = BTreeMap::new();
    let mut roots_found = 0;
    let mut total_dim = 0;
    for idx in candidates {
        let shifted = m - &Matrix::scalar(n, &idx.embed());
        let space = shifted.kernel();
        if space.is_zero() {
            continue;
        }
        roots_found += 1;
        total_dim += space.dim();
        spectrum.insert(idx, space);
    }
    if total_dim != n {
        return Err(Error::NotSigmaOperator(Box::new(SpectrumDeficit {
            found: spectrum.iter().map(|(k, s)| (*k, s.dim())).collect(),
            deficit: n - total_dim,
            defective: Vec::new(),
        })));
    }
    let certificate = Certificate {
        source,
        gershgorin_radii: radii,
        candidates_examined: examined,
        roots_found,
        eigenspace_dims: spectrum.iter().map(|(k, s)| (*k, s.dim())).collect(),
    };
    SigmaOperator::from_parts(m.clone(), spectrum, certificate)
}

/// Exact projector onto `I^{p,q}_A`; the zero matrix off the spectrum.
pub fn projector(op: &SigmaOperator, idx: LatticeIndex) -> Matrix {
    op.projector(idx)
}

/// Coefficients `c_0, ..., c_n` (constant first) of `det(zI - m)`, by Faddeev-LeVerrier.
pub(crate) fn characteristic_polynomial(m: &Matrix) -> Vec<GaussianRational> {
    let n = m.rows();
    let mut coeffs = vec![GaussianRational::zero(); n + 1];
    coeffs[n] = GaussianRational::one();
    let mut acc = Matrix::zeros(n, n);
    for k in 1..=n {
        acc = &(m * &acc) + &Matrix::scalar(n, &coeffs[n - k + 1]);
        let t = (m * &acc).trace();
        coeffs[n - k] = -(&t / &GaussianRational::from_ints(k as i64, 0));
    }
    coeffs
}

fn poly_eval(coeffs: &[GaussianRational], z: &GaussianRational) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * z) + c;
    }
    acc
}

/// Multiplicity of `z` as a root, by repeated synthetic division.
fn root_multiplicity(coeffs: &[GaussianRational], z: &GaussianRational) -> usize {
    let mut poly = coeffs.to_vec();
    let mut mult = 0;
    while poly.len() > 1 && poly_eval(&poly, z).is_zero() {
        let deg = poly.len() - 1;
        let mut quotient = vec![GaussianRational::zero(); deg];
        let mut carry = GaussianRational::zero();
        for k in (0..deg).rev() {
            carry = &(&carry * z) + &poly[k + 1];
            quotient[k] = carry.clone();
        }
        poly = quotient;
        mult += 1;
    }
    mult
}

/// Exact rational test for `m1(λ - c)^2 <= 2 R^2` on lattice candidates.
struct Disc {
    center_re: Rational,
    center_im: Rational,
    radius: Rational,
    /// Integer-scaled data `(D, D*re c, D*im c, D*R)` when it fits in `i128`.
    scaled: Option<(i128, i128, i128, i128)>,
}

impl Disc {
    fn new(center: &GaussianRational, radius: &Rational) -> Self {
        let d = [center.re.denom(), center.im.denom(), radius.denom()]
            .into_iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x));
        let scale = |r: &Rational| -> Option<i128> { (r * Rational::from_integer(d.clone())).to_integer().to_i128() };
        let scaled = (|| {
            let s = (
                d.to_i128()?,
                scale(&center.re)?,
                scale(&center.im)?,
                scale(radius)?,
            );
            // Leave headroom for squaring the l1 distance.
            let bound = 1i128 << 50;
            (s.0 < bound && s.1.abs() < bound && s.2.abs() < bound && s.3 < bound).then_some(s)
        })();
        Disc {
            center_re: center.re.clone(),
            center_im: center.im.clone(),
            radius: radius.clone(),
            scaled,
        }
    }

    fn contains(&self, a: i64, b: i64) -> bool {
        if let Some((d, cr, ci, r)) = self.scaled {
            let l1 = (d * a as i128 - cr).abs() + (d * b as i128 - ci).abs();
            return l1 * l1 <= 2 * r * r;
        }
        let da = Rational::from_integer(a.into()) - &self.center_re;
        let db = Rational::from_integer(b.into()) - &self.center_im;
        let l1 = da.abs() + db.abs();
        &l1 * &l1 <= Rational::from_integer(2.into()) * &self.radius * &self.radius
    }

    /// Integer box containing every lattice point of the region.
    fn bounding_box(&self) -> (i64, i64, i64, i64) {
        // sqrt(2) R <= ceil(sqrt(ceil(2 R^2))).
        let two_r2 = (Rational::from_integer(2.into()) * &self.radius * &self.radius).ceil().to_integer();
        let mut reach = two_r2.sqrt();
        if &reach * &reach < two_r2 {
            reach += 1;
        }
        let lo = |c: &Rational| (c - Rational::from_integer(reach.clone())).floor().to_integer();
        let hi = |c: &Rational| (c + Rational::from_integer(reach.clone())).ceil().to_integer();
        let to = |x: BigInt| x.to_i64().unwrap_or(if x.is_negative() { i64::MIN / 4 } else { i64::MAX / 4 });
        (
            to(lo(&self.center_re)),
            to(hi(&self.center_re)),
            to(lo(&self.center_im)),
            to(hi(&self.center_im)),
        )
    }

    fn box_size(&self) -> u128 {
        let (a0, a1, b0, b1) = self.bounding_box();
        ((a1 - a0 + 1) as u128).saturating_mul((b1 - b0 + 1) as u128)
    }
}

/// Characteristic polynomial with cleared denominators, reduced modulo a
/// Mersenne prime. A nonzero residue proves the candidate is not a root.
struct ModularPoly {
    coeffs: Vec<(u64, u64)>,
}

const MODULUS: u64 = (1 << 61) - 1;

fn reduce(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(MODULUS)).to_u64().expect("residue fits")
}

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn submod(a: u64, b: u64) -> u64 {
    addmod(a, MODULUS - b)
}

impl ModularPoly {
    fn new(coeffs: &[GaussianRational]) -> Self {
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
        let scale = Rational::from_integer(lcm);
        let coeffs = coeffs
            .iter()
            .map(|c| {
                let re = (&c.re * &scale).to_integer();
                let im = (&c.im * &scale).to_integer();
                (reduce(&re), reduce(&im))
            })
            .collect();
        ModularPoly { coeffs }
    }

    fn vanishes_at(&self, a: i64, b: i64) -> bool {
        let zr = reduce(&BigInt::from(a));
        let zi = reduce(&BigInt::from(b));
        let (mut ar, mut ai) = (0u64, 0u64);
        for &(cr, ci) in self.coeffs.iter().rev() {
            let nr = submod(mulmod(ar, zr), mulmod(ai, zi));
            let ni = addmod(mulmod(ar, zi), mulmod(ai, zr));
            ar = addmod(nr, cr);
            ai = addmod(ni, ci);
        }
        ar == 0 && ai == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(p: i64, q: i64) -> LatticeIndex {
        LatticeIndex::new(p, q)
    }

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::from_ints(a, b)
    }

    fn fixture_a() -> Matrix {
        Matrix::from_int_pairs(&[&[(0, 0), (0, 2)], &[(0, 0), (2, 0)]])
    }

    #[test]
    fn certifies_upper_triangular_fixture() {
        let op = certify_sigma_operator(&fixture_a()).unwrap();
        let keys: Vec<_> = op.spectrum().keys().copied().collect();
        assert_eq!(keys, vec![idx(0, 0), idx(1, 1)]);
        assert_eq!(op.eigenspace(idx(0, 0)), Subspace::span(2, vec![vec![g(1, 0), g(0, 0)]]).unwrap());
        assert_eq!(op.eigenspace(idx(1, 1)), Subspace::span(2, vec![vec![g(0, 1), g(1, 0)]]).unwrap());
    }

    #[test]
    fn certifies_diagonal() {
        let m = Matrix::diagonal(&[g(1, -1), g(1, 1)]);
        let op = certify_sigma_operator(&m).unwrap();
        assert_eq!(op.certificate().eigenspace_dims.get(&idx(1, 0)), Some(&1));
        assert_eq!(op.certificate().eigenspace_dims.get(&idx(0, 1)), Some(&1));
    }

    #[test]
    fn rejects_nilpotent() {
        let m = Matrix::from_int_pairs(&[&[(0, 0), (1, 0)], &[(0, 0), (0, 0)]]);
        match certify_sigma_operator(&m) {
            Err(Error::NotSigmaOperator(d)) => {
                assert_eq!(d.deficit, 1);
                assert_eq!(d.defective, vec![idx(0, 0)]);
                assert_eq!(d.found.get(&idx(0, 0)), Some(&1));
            }
            other => panic!("expected NotSigmaOperator, got {other:?}"),
        }
        let msg = certify_sigma_operator(&m).unwrap_err().to_string();
        assert!(msg.contains("deficit 1 at λ=0"), "{msg}");
    }

    #[test]
    fn rejects_off_lattice_spectrum() {
        let m = Matrix::diagonal(&[g(1, 0)]);
        match certify_sigma_operator(&m) {
            Err(Error::NotSigmaOperator(d)) => {
                assert_eq!(d.deficit, 1);
                assert!(d.found.is_empty());
            }
            other => panic!("expected NotSigmaOperator, got {other:?}"),
        }
        let half = Matrix::diagonal(&[GaussianRational::from_fraction(1, 2)]);
        assert!(certify_sigma_operator(&half).is_err());
        assert!(matches!(
            certify_sigma_operator(&Matrix::zeros(1, 2)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn empty_operator() {
        let op = certify_sigma_operator(&Matrix::zeros(0, 0)).unwrap();
        assert!(op.spectrum().is_empty());
    }

    #[test]
    fn projector_examples() {
        let op = certify_sigma_operator(&Matrix::diagonal(&[g(0, 0), g(2, 0)])).unwrap();
        assert_eq!(projector(&op, idx(0, 0)), Matrix::diagonal(&[g(1, 0), g(0, 0)]));
        let op = certify_sigma_operator(&fixture_a()).unwrap();
        assert_eq!(
            projector(&op, idx(1, 1)),
            Matrix::from_int_pairs(&[&[(0, 0), (0, 1)], &[(0, 0), (1, 0)]])
        );
        assert_eq!(projector(&op, idx(5, -3)), Matrix::zeros(2, 2));
    }

    #[test]
    fn characteristic_polynomial_of_fixture() {
        // z(z - 2) = z^2 - 2z.
        let c = characteristic_polynomial(&fixture_a());
        assert_eq!(c, vec![g(0, 0), g(-2, 0), g(1, 0)]);
        assert_eq!(root_multiplicity(&c, &g(0, 0)), 1);
        assert_eq!(root_multiplicity(&[g(0, 0), g(0, 0), g(1, 0)], &g(0, 0)), 2);
    }

    #[test]
    fn modular_filter_has_no_false_negatives() {
        let c = characteristic_polynomial(&fixture_a());
        let mp = ModularPoly::new(&c);
        assert!(mp.vanishes_at(0, 0));
        assert!(mp.vanishes_at(2, 0));
        assert!(!mp.vanishes_at(1, 1));
    }

    #[test]
    fn disc_contains_matches_rational_path() {
        let c = GaussianRational::new(Rational::new(1.into(), 3.into()), Rational::new((-5).into(), 7.into()));
        let r = Rational::new(9.into(), 4.into());
        let mut fast = Disc::new(&c, &r);
        let slow_only = Disc { scaled: None, ..Disc::new(&c, &r) };
        for a in -6..6 {
            for b in -6..6 {
                assert_eq!(fast.contains(a, b), slow_only.contains(a, b), "({a},{b})");
            }
        }
        fast.scaled = None;
        assert!(fast.contains(0, 0));
    }
}
