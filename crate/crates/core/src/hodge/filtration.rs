use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};

fn check_steps(
    ambient_dim: usize,
    steps: impl IntoIterator<Item = (i64, Subspace)>,
) -> Result<BTreeMap<i64, Subspace>> {
    let mut map = BTreeMap::new();
    for (index, space) in steps {
        if space.ambient_dim() != ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: space.ambient_dim(),
            });
        }
        if map.insert(index, space).is_some() {
            return Err(Error::DuplicateIndex(format!("filtration index {index}")));
        }
    }
    Ok(map)
}

/// Finite increasing filtration `W_n` of `C^n`, stored by its jumps.
///
/// `W_n` equals the step at the largest index `<= n`, or zero below the
/// first step. Redundant steps are dropped at construction, so equal
/// filtrations compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration {
    ambient_dim: usize,
    steps: BTreeMap<i64, Subspace>,
    zero: Subspace,
}

impl WeightFiltration {
    pub fn new(ambient_dim: usize, steps: impl IntoIterator<Item = (i64, Subspace)>) -> Result<Self> {
        let raw = check_steps(ambient_dim, steps)?;
        let zero = Subspace::zero(ambient_dim);
        let mut steps = BTreeMap::new();
        let mut prev = &zero;
        for (n, s) in &raw {
            if s != prev {
                steps.insert(*n, s.clone());
            }
            prev = s;
        }
        Ok(WeightFiltration {
            ambient_dim,
            steps,
            zero,
        })
    }

    /// The filtration with a single jump `W_n = V` for `n >= weight`.
    pub fn pure(ambient_dim: usize, weight: i64) -> Self {
        Self::new(ambient_dim, [(weight, Subspace::full(ambient_dim))]).expect("dimensions agree")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn get(&self, n: i64) -> &Subspace {
        self.steps
            .range(..=n)
            .next_back()
            .map_or(&self.zero, |(_, s)| s)
    }

    /// Jump indices with their subspaces, in increasing order.
    pub fn steps(&self) -> impl Iterator<Item = (i64, &Subspace)> {
        self.steps.iter().map(|(n, s)| (*n, s))
    }

    /// Smallest and largest jump index.
    pub fn range(&self) -> Option<(i64, i64)> {
        Some((*self.steps.keys().next()?, *self.steps.keys().next_back()?))
    }
}

/// Finite decreasing filtration `F^p` of `C^n`, stored by its jumps.
///
/// `F^p` equals the step at the smallest index `>= p`, or zero above the
/// last step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeFiltration {
    ambient_dim: usize,
    steps: BTreeMap<i64, Subspace>,
    zero: Subspace,
}

impl HodgeFiltration {
    pub fn new(ambient_dim: usize, steps: impl IntoIterator<Item = (i64, Subspace)>) -> Result<Self> {
        let raw = check_steps(ambient_dim, steps)?;
        let zero = Subspace::zero(ambient_dim);
        let mut steps = BTreeMap::new();
        let mut prev = &zero;
        for (p, s) in raw.iter().rev() {
            if s != prev {
                steps.insert(*p, s.clone());
            }
            prev = s;
        }
        Ok(HodgeFiltration {
            ambient_dim,
            steps,
            zero,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn get(&self, p: i64) -> &Subspace {
        self.steps.range(p..).next().map_or(&self.zero, |(_, s)| s)
    }

    /// Jump indices with their subspaces, in increasing index order.
    pub fn steps(&self) -> impl Iterator<Item = (i64, &Subspace)> {
        self.steps.iter().map(|(p, s)| (*p, s))
    }

    pub fn range(&self) -> Option<(i64, i64)> {
        Some((*self.steps.keys().next()?, *self.steps.keys().next_back()?))
    }
}

/// A weight filtration and a Hodge filtration on the same space.
///
/// The `validated` flag is only ever set by [`MixedHodgeStructure::validated`]
/// after [`validate_mhs`](super::validate_mhs) reports success. Equality
/// compares the filtrations only.
#[derive(Clone, Debug)]
pub struct MixedHodgeStructure {
    weight: WeightFiltration,
    hodge: HodgeFiltration,
    validated: bool,
}

impl MixedHodgeStructure {
    /// Pair two filtrations without validating them.
    pub fn new(weight: WeightFiltration, hodge: HodgeFiltration) -> Result<Self> {
        if weight.ambient_dim() != hodge.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: weight.ambient_dim(),
                found: hodge.ambient_dim(),
            });
        }
        Ok(MixedHodgeStructure {
            weight,
            hodge,
            validated: false,
        })
    }

    /// Pair and validate; fails with the full report when the data is not a MHS.
    pub fn validated(weight: WeightFiltration, hodge: HodgeFiltration) -> Result<Self> {
        let mut mhs = Self::new(weight, hodge)?;
        let report = super::validate_mhs(&mhs.weight, &mhs.hodge)?;
        if !report.passed() {
            return Err(Error::InvalidMhs(Box::new(report)));
        }
        mhs.validated = true;
        Ok(mhs)
    }

    /// For callers that have just run the validator themselves.
    pub(crate) fn from_checked(weight: WeightFiltration, hodge: HodgeFiltration) -> Self {
        debug_assert_eq!(weight.ambient_dim(), hodge.ambient_dim());
        MixedHodgeStructure {
            weight,
            hodge,
            validated: true,
        }
    }

    pub fn weight(&self) -> &WeightFiltration {
        &self.weight
    }

    pub fn hodge(&self) -> &HodgeFiltration {
        &self.hodge
    }

    pub fn ambient_dim(&self) -> usize {
        self.weight.ambient_dim()
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }
}

impl PartialEq for MixedHodgeStructure {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight && self.hodge == other.hodge
    }
}

impl Eq for MixedHodgeStructure {}

/// A basis of `W_n` made of vectors with real coordinates.
pub fn real_basis_of_weight(w: &WeightFiltration, n: i64) -> Result<Matrix> {
    let space = w.get(n);
    if space.conj() != *space {
        return Err(Error::NotReal);
    }
    let mut real_vectors = Vec::with_capacity(2 * space.dim());
    for v in space.vectors() {
        let c: Vec<_> = v.iter().map(|x| x.conj()).collect();
        // v + conj(v) and i(v - conj(v)) are real and span v over C together.
        real_vectors.push(v.iter().zip(&c).map(|(a, b)| a + b).collect());
        real_vectors.push(
            v.iter()
                .zip(&c)
                .map(|(a, b)| &(a - b) * &crate::linalg::GaussianRational::i())
                .collect(),
        );
    }
    let real_span = Subspace::span(w.ambient_dim(), real_vectors)?;
    debug_assert_eq!(&real_span, space);
    Ok(real_span.basis().clone())
}
