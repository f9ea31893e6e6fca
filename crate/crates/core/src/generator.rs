//! Seeded random instances: split bigradings, mixed Hodge structures and
//! σ-operators of the three flavors.
//!
//! Every function is deterministic in its profile, seed included. Outputs
//! are checked by the same validators the library exposes; construction
//! alone is never trusted.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hodge::{bigrading_to_filtrations, verify_splitting, BiGrading, MixedHodgeStructure};
use crate::linalg::{GaussianRational, LatticeIndex, Matrix, Rational, Subspace, Vector};
use crate::sigma::{
    certify_with_spectrum, check_pseudo_real, operator_from_mhs, operator_of_bigrading, PseudoRealityMode,
};

/// Attempts before a sampler gives up.
pub const RETRY_BUDGET: usize = 64;

/// Hodge numbers to generate, with entry bound and seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenProfile {
    dims: BTreeMap<LatticeIndex, usize>,
    coefficient_bound: u32,
    seed: u64,
}

impl GenProfile {
    /// Rejects duplicate indices, `dims(p,q) != dims(q,p)` and a zero bound.
    pub fn new(
        dims: impl IntoIterator<Item = (LatticeIndex, usize)>,
        coefficient_bound: u32,
        seed: u64,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, d) in dims {
            if map.insert(idx, d).is_some() {
                return Err(Error::DuplicateIndex(format!("profile index {idx}")));
            }
        }
        map.retain(|_, d| *d > 0);
        for (idx, d) in &map {
            let mirror = map.get(&idx.swapped()).copied().unwrap_or(0);
            if mirror != *d {
                return Err(Error::InvalidProfile(format!(
                    "dims{idx} = {d} but dims{} = {mirror}",
                    idx.swapped()
                )));
            }
        }
        if coefficient_bound == 0 {
            return Err(Error::InvalidProfile("coefficient bound must be positive".into()));
        }
        Ok(GenProfile {
            dims: map,
            coefficient_bound,
            seed,
        })
    }

    pub fn dims(&self) -> &BTreeMap<LatticeIndex, usize> {
        &self.dims
    }

    pub fn coefficient_bound(&self) -> u32 {
        self.coefficient_bound
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenProfile { seed, ..self.clone() }
    }

    /// Independent random stream per purpose.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// `conj A = A`.
    Real,
    /// The operator of a random mixed Hodge structure.
    Strong,
    /// Weakly but not strongly pseudo-real.
    WeakOnly,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Real => "real",
            Flavor::Strong => "strong",
            Flavor::WeakOnly => "weak_only",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "real" => Ok(Flavor::Real),
            "strong" => Ok(Flavor::Strong),
            "weak_only" | "weak-only" => Ok(Flavor::WeakOnly),
            other => Err(format!("unknown flavor {other:?} (expected real, strong or weak_only)")),
        }
    }
}

fn rational(rng: &mut ChaCha8Rng, bound: u32) -> Rational {
    let b = bound as i64;
    let num = rng.random_range(-b..=b);
    let den = rng.random_range(1..=b);
    Rational::new(num.into(), den.into())
}

fn gaussian(rng: &mut ChaCha8Rng, bound: u32) -> GaussianRational {
    // Sparse entries keep the exact arithmetic small.
    if rng.random_bool(0.5) {
        return GaussianRational::zero();
    }
    GaussianRational::new(rational(rng, bound), rational(rng, bound))
}

fn real_invertible(n: usize, rng: &mut ChaCha8Rng, bound: u32) -> Result<Matrix> {
    for _ in 0..RETRY_BUDGET {
        let entries = (0..n * n).map(|_| GaussianRational::real(rational(rng, bound))).collect();
        let g = Matrix::new(n, n, entries)?;
        if g.rank() == n {
            return Ok(g);
        }
    }
    Err(Error::ExhaustedRetries {
        attempts: RETRY_BUDGET,
        what: format!("invertible real {n}x{n} matrix"),
    })
}

fn unit(n: usize, k: usize, value: GaussianRational) -> Vector {
    let mut v = vec![GaussianRational::zero(); n];
    v[k] = value;
    v
}

/// A bigrading with `I^{p,q} = conj I^{q,p}` and the profile's Hodge numbers.
///
/// For `p > q` each basis vector of `I^{p,q}` is `x + iy` on two fresh real
/// coordinates, and `I^{q,p}` gets `x - iy`; `I^{p,p}` gets real coordinates.
/// A random invertible real matrix then moves everything off the axes.
pub fn random_split_bigrading(profile: &GenProfile) -> Result<BiGrading> {
    let n = profile.total_dim();
    let mut rng = profile.rng(1);
    let mut pieces: BTreeMap<LatticeIndex, Vec<Vector>> = BTreeMap::new();
    let mut next = 0;
    for (idx, d) in profile.dims() {
        if idx.p < idx.q {
            continue;
        }
        for _ in 0..*d {
            if idx.p == idx.q {
                pieces.entry(*idx).or_default().push(unit(n, next, GaussianRational::from_ints(1, 0)));
                next += 1;
            } else {
                let mut plus = unit(n, next, GaussianRational::from_ints(1, 0));
                plus[next + 1] = GaussianRational::i();
                let minus: Vector = plus.iter().map(GaussianRational::conj).collect();
                pieces.entry(*idx).or_default().push(plus);
                pieces.entry(idx.swapped()).or_default().push(minus);
                next += 2;
            }
        }
    }
    let g = real_invertible(n, &mut rng, profile.coefficient_bound())?;
    let moved = pieces
        .into_iter()
        .map(|(idx, vs)| Ok((idx, Subspace::span(n, vs.iter().map(|v| g.mul_vec(v)))?)))
        .collect::<Result<Vec<_>>>()?;
    let bg = BiGrading::new(n, moved)?;
    debug_assert_eq!(bg, bg.conj());
    Ok(bg)
}

/// Basis columns of the pieces, with the column range of each index.
fn eigenbasis(bg: &BiGrading) -> (Vec<Vector>, Vec<(LatticeIndex, usize, usize)>) {
    let mut columns = Vec::new();
    let mut ranges = Vec::new();
    for (idx, piece) in bg.pieces() {
        let start = columns.len();
        columns.extend(piece.vectors());
        ranges.push((*idx, start, columns.len()));
    }
    (columns, ranges)
}

/// Pieces `(1 + T)(I^{p,q})` for `T` given in coordinates of the pieces'
/// bases: block `(target, source)` of `m` is the matrix of `T` from
/// `I^{source}` to `I^{target}`.
fn apply_blocks(bg: &BiGrading, m: &Matrix) -> Result<BiGrading> {
    let n = bg.ambient_dim();
    let (columns, ranges) = eigenbasis(bg);
    let b = Matrix::from_columns(n, &columns)?;
    let moved = b.try_mul(&(&Matrix::identity(n) + m))?;
    let pieces = ranges
        .into_iter()
        .map(|(idx, start, end)| Ok((idx, Subspace::span(n, (start..end).map(|j| moved.column(j)))?)))
        .collect::<Result<Vec<_>>>()?;
    BiGrading::new(n, pieces)
}

/// Sample block coordinates where `allowed(target, source)` holds.
fn random_blocks(
    bg: &BiGrading,
    rng: &mut ChaCha8Rng,
    bound: u32,
    allowed: impl Fn(LatticeIndex, LatticeIndex) -> bool,
) -> Matrix {
    let n = bg.ambient_dim();
    let (_, ranges) = eigenbasis(bg);
    let mut m = Matrix::zeros(n, n);
    for &(target, t0, t1) in &ranges {
        for &(source, s0, s1) in &ranges {
            if !allowed(target, source) {
                continue;
            }
            for i in t0..t1 {
                for j in s0..s1 {
                    m.set(i, j, gaussian(rng, bound));
                }
            }
        }
    }
    m
}

fn lowers_both(target: LatticeIndex, source: LatticeIndex) -> bool {
    target.p < source.p && target.q < source.q
}

/// Check that `bg` is the Deligne splitting of the structure it induces.
fn gate(bg: &BiGrading) -> Result<MixedHodgeStructure> {
    let (w, f) = bigrading_to_filtrations(bg)?;
    let mhs = MixedHodgeStructure::validated(w, f)?;
    let report = verify_splitting(bg, &mhs);
    if !report.passed() {
        return Err(Error::InvalidMhs(Box::new(report)));
    }
    Ok(mhs)
}

/// Apply `1 + T` to every piece, for `T` given in ambient coordinates.
///
/// `T` must send each `I^{p,q}` into `D_{p-1,q-1}`; the result is accepted
/// only if it passes [`verify_splitting`] against its own filtrations.
pub fn perturb_with(bg: &BiGrading, t: &Matrix) -> Result<BiGrading> {
    let n = bg.ambient_dim();
    if t.rows() != n || t.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: t.rows().max(t.cols()),
        });
    }
    let mut pieces = Vec::new();
    for (idx, piece) in bg.pieces() {
        let lower = bg.bifiltration(idx.p - 1, idx.q - 1);
        let image = piece.image(t)?;
        if !lower.contains(&image)? {
            return Err(Error::InvalidProfile(format!(
                "perturbation does not map I^{idx} into D_({},{})",
                idx.p - 1,
                idx.q - 1
            )));
        }
        pieces.push((*idx, piece.image(&(&Matrix::identity(n) + t))?));
    }
    let out = BiGrading::new(n, pieces)?;
    gate(&out)?;
    Ok(out)
}

/// `(1 + T)(I^{p,q})` for a random `T` lowering both indices.
///
/// The input must be split. Candidates failing [`verify_splitting`] are
/// resampled up to [`RETRY_BUDGET`] times.
pub fn perturb_bigrading(bg: &BiGrading, profile: &GenProfile) -> Result<BiGrading> {
    if *bg != bg.conj() {
        return Err(Error::NotReal);
    }
    let mut rng = profile.rng(2);
    let mut last = None;
    for _ in 0..RETRY_BUDGET {
        let m = random_blocks(bg, &mut rng, profile.coefficient_bound(), lowers_both);
        let out = apply_blocks(bg, &m)?;
        match gate(&out) {
            Ok(_) => return Ok(out),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::ExhaustedRetries {
        attempts: RETRY_BUDGET,
        what: format!("valid perturbation ({})", last.map_or_else(String::new, |e| e.to_string())),
    })
}

/// A random mixed Hodge structure with the profile's Hodge numbers.
pub fn random_mhs(profile: &GenProfile) -> Result<MixedHodgeStructure> {
    let split = random_split_bigrading(profile)?;
    let bg = perturb_bigrading(&split, profile)?;
    gate(&bg)
}

/// Whether the profile has a source `(p,q)` and target `(r,s)` with
/// `r + s < p + q` but not `r < p, s < q`.
fn has_chiral_pair(profile: &GenProfile) -> bool {
    let keys: Vec<_> = profile.dims().keys().copied().collect();
    keys.iter()
        .any(|s| keys.iter().any(|t| t.weight() < s.weight() && !lowers_both(*t, *s)))
}

/// A random σ-operator of the given flavor.
///
/// `weak_only` perturbs a split bigrading by a weight-lowering map with a
/// component that does not lower both indices, and keeps the first result
/// that is weakly but not strongly pseudo-real. Profiles without such an
/// index pair fail immediately.
pub fn random_sigma_operator(profile: &GenProfile, flavor: Flavor) -> Result<Matrix> {
    match flavor {
        Flavor::Real => {
            let m = operator_of_bigrading(&random_split_bigrading(profile)?)?;
            if !m.is_real() {
                return Err(Error::Internal("operator of a split bigrading is not real".into()));
            }
            Ok(m)
        }
        Flavor::Strong => Ok(operator_from_mhs(&random_mhs(profile)?)?.matrix().clone()),
        Flavor::WeakOnly => {
            if !has_chiral_pair(profile) {
                return Err(Error::ExhaustedRetries {
                    attempts: 0,
                    what: "profile has no weight-lowering index pair outside the strong range".into(),
                });
            }
            let split = random_split_bigrading(profile)?;
            let mut rng = profile.rng(3);
            for _ in 0..RETRY_BUDGET {
                let m = random_blocks(&split, &mut rng, profile.coefficient_bound(), |t, s| {
                    t.weight() < s.weight()
                });
                let bg = apply_blocks(&split, &m)?;
                if !bg.is_direct_sum() {
                    continue;
                }
                let a = operator_of_bigrading(&bg)?;
                let op = certify_with_spectrum(&a, bg.pieces().keys().copied())?;
                if check_pseudo_real(&op, PseudoRealityMode::Weak).holds
                    && !check_pseudo_real(&op, PseudoRealityMode::Strong).holds
                {
                    return Ok(a);
                }
            }
            Err(Error::ExhaustedRetries {
                attempts: RETRY_BUDGET,
                what: "weakly but not strongly pseudo-real operator".into(),
            })
        }
    }
}
