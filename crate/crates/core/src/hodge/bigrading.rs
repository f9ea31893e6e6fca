use std::collections::BTreeMap;

use super::filtration::{HodgeFiltration, WeightFiltration};
use crate::error::{Error, Result};
use crate::linalg::{LatticeIndex, Subspace};

/// A family of subspaces `I^{p,q}` indexed by `Z^2`.
///
/// Only nonzero pieces are stored. Construction checks ambient dimensions;
/// whether the pieces actually decompose the space is reported by
/// [`BiGrading::is_direct_sum`], since perturbed and hand-edited gradings
/// are legitimate inputs to the verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiGrading {
    ambient_dim: usize,
    pieces: BTreeMap<LatticeIndex, Subspace>,
}

impl BiGrading {
    pub fn new(
        ambient_dim: usize,
        pieces: impl IntoIterator<Item = (LatticeIndex, Subspace)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, space) in pieces {
            if space.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: space.ambient_dim(),
                });
            }
            if map.contains_key(&idx) {
                return Err(Error::DuplicateIndex(format!("bigrading piece {idx}")));
            }
            if !space.is_zero() {
                map.insert(idx, space);
            }
        }
        Ok(BiGrading {
            ambient_dim,
            pieces: map,
        })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        BiGrading {
            ambient_dim,
            pieces: BTreeMap::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn pieces(&self) -> &BTreeMap<LatticeIndex, Subspace> {
        &self.pieces
    }

    /// The piece at `idx`, zero when absent.
    pub fn piece(&self, idx: LatticeIndex) -> Subspace {
        self.pieces
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.ambient_dim))
    }

    fn sum_where(&self, pred: impl Fn(LatticeIndex) -> bool) -> Subspace {
        Subspace::sum_all(
            self.ambient_dim,
            self.pieces.iter().filter(|(idx, _)| pred(**idx)).map(|(_, s)| s),
        )
        .expect("pieces share the ambient dimension")
    }

    /// `W_n = sum of I^{p,q}` with `p + q <= n`.
    pub fn weight_step(&self, n: i64) -> Subspace {
        self.sum_where(|idx| idx.weight() <= n)
    }

    /// `F^p = sum of I^{k,q}` with `k >= p`.
    pub fn hodge_step(&self, p: i64) -> Subspace {
        self.sum_where(|idx| idx.p >= p)
    }

    /// `D_{p,q} = sum of I^{k,l}` with `k <= p` and `l <= q`.
    pub fn bifiltration(&self, p: i64, q: i64) -> Subspace {
        self.sum_where(|idx| idx.p <= p && idx.q <= q)
    }

    /// Span of every piece and the sum of their dimensions.
    fn span_and_total(&self) -> (Subspace, usize) {
        let span = self.sum_where(|_| true);
        (span, self.pieces.values().map(Subspace::dim).sum())
    }

    pub fn is_direct_sum(&self) -> bool {
        self.check_direct_sum().is_ok()
    }

    pub fn check_direct_sum(&self) -> Result<()> {
        let (span, total) = self.span_and_total();
        if total != self.ambient_dim || !span.is_full() {
            return Err(Error::NotDirectSum {
                dim_sum: total,
                span_dim: span.dim(),
                ambient_dim: self.ambient_dim,
            });
        }
        Ok(())
    }

    /// Entrywise conjugate with indices swapped: `(p,q) -> conj I^{q,p}`.
    pub fn conj(&self) -> BiGrading {
        BiGrading {
            ambient_dim: self.ambient_dim,
            pieces: self
                .pieces
                .iter()
                .map(|(idx, s)| (idx.swapped(), s.conj()))
                .collect(),
        }
    }

    /// Smallest and largest value of `p` and `q` over all pieces.
    pub(crate) fn index_bounds(&self) -> Option<(i64, i64)> {
        let lo = self.pieces.keys().map(|i| i.p.min(i.q)).min()?;
        let hi = self.pieces.keys().map(|i| i.p.max(i.q)).max()?;
        Some((lo, hi))
    }

    pub(crate) fn weight_bounds(&self) -> Option<(i64, i64)> {
        let lo = self.pieces.keys().map(|i| i.weight()).min()?;
        let hi = self.pieces.keys().map(|i| i.weight()).max()?;
        Some((lo, hi))
    }

    pub(crate) fn p_bounds(&self) -> Option<(i64, i64)> {
        let lo = self.pieces.keys().map(|i| i.p).min()?;
        let hi = self.pieces.keys().map(|i| i.p).max()?;
        Some((lo, hi))
    }
}

/// Dimension of each nonzero piece.
pub fn hodge_numbers(bg: &BiGrading) -> BTreeMap<LatticeIndex, usize> {
    bg.pieces().iter().map(|(idx, s)| (*idx, s.dim())).collect()
}

/// Read off `W_n = ⊕_{p+q<=n} I^{p,q}` and `F^p = ⊕_{k>=p} I^{k,q}`.
pub fn bigrading_to_filtrations(bg: &BiGrading) -> Result<(WeightFiltration, HodgeFiltration)> {
    bg.check_direct_sum()?;
    let n = bg.ambient_dim();
    let mut weight = Vec::new();
    if let Some((lo, hi)) = bg.weight_bounds() {
        for k in lo..=hi {
            let step = bg.weight_step(k);
            if !step.is_real() {
                return Err(Error::NotRealWeight { index: k });
            }
            weight.push((k, step));
        }
    }
    let mut hodge = Vec::new();
    if let Some((lo, hi)) = bg.p_bounds() {
        for p in lo..=hi {
            hodge.push((p, bg.hodge_step(p)));
        }
    }
    Ok((WeightFiltration::new(n, weight)?, HodgeFiltration::new(n, hodge)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::GaussianRational;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::from_ints(a, b)
    }

    fn span(n: usize, vs: Vec<Vec<GaussianRational>>) -> Subspace {
        Subspace::span(n, vs).unwrap()
    }

    fn idx(p: i64, q: i64) -> LatticeIndex {
        LatticeIndex::new(p, q)
    }

    #[test]
    fn filtrations_of_running_example() {
        let e1 = span(2, vec![vec![g(1, 0), g(0, 0)]]);
        let f1 = span(2, vec![vec![g(0, 1), g(1, 0)]]);
        let bg = BiGrading::new(2, [(idx(0, 0), e1.clone()), (idx(1, 1), f1.clone())]).unwrap();
        let (w, f) = bigrading_to_filtrations(&bg).unwrap();
        assert_eq!(w.get(0), &e1);
        assert_eq!(w.get(1), &e1);
        assert_eq!(w.get(2), &Subspace::full(2));
        assert_eq!(f.get(0), &Subspace::full(2));
        assert_eq!(f.get(1), &f1);
        assert_eq!(f.get(2), &Subspace::zero(2));
        assert_eq!(
            hodge_numbers(&bg).into_iter().collect::<Vec<_>>(),
            vec![(idx(0, 0), 1), (idx(1, 1), 1)]
        );
    }

    #[test]
    fn single_piece() {
        let bg = BiGrading::new(3, [(idx(0, 0), Subspace::full(3))]).unwrap();
        let (w, f) = bigrading_to_filtrations(&bg).unwrap();
        assert_eq!(w.get(0), &Subspace::full(3));
        assert_eq!(f.get(0), &Subspace::full(3));
        assert_eq!(f.get(1), &Subspace::zero(3));
    }

    #[test]
    fn not_direct_sum() {
        let bg = BiGrading::new(2, [(idx(1, 0), span(2, vec![vec![g(1, 0), g(0, 1)]]))]).unwrap();
        assert!(matches!(bigrading_to_filtrations(&bg), Err(Error::NotDirectSum { .. })));
        let e1 = span(2, vec![vec![g(1, 0), g(0, 0)]]);
        let overlap = BiGrading::new(
            2,
            [(idx(0, 0), e1.clone()), (idx(1, 1), e1), (idx(2, 2), Subspace::full(2))],
        )
        .unwrap();
        assert!(!overlap.is_direct_sum());
    }

    #[test]
    fn non_real_weight() {
        let chiral = span(2, vec![vec![g(1, 0), g(0, 1)]]);
        let other = span(2, vec![vec![g(1, 0), g(0, 0)]]);
        let bg = BiGrading::new(2, [(idx(0, 0), chiral), (idx(1, 1), other)]).unwrap();
        assert!(matches!(
            bigrading_to_filtrations(&bg),
            Err(Error::NotRealWeight { index: 0 })
        ));
    }

    #[test]
    fn hodge_numbers_of_weight_one_shape() {
        let bg = BiGrading::new(
            2,
            [
                (idx(1, 0), span(2, vec![vec![g(1, 0), g(0, 1)]])),
                (idx(0, 1), span(2, vec![vec![g(1, 0), g(0, -1)]])),
            ],
        )
        .unwrap();
        let h = hodge_numbers(&bg);
        assert_eq!(h.get(&idx(1, 0)), Some(&1));
        assert_eq!(h.get(&idx(0, 1)), Some(&1));
        assert!(hodge_numbers(&BiGrading::empty(0)).is_empty());
    }

    #[test]
    fn zero_pieces_dropped_and_duplicates_rejected() {
        let bg = BiGrading::new(1, [(idx(0, 0), Subspace::zero(1))]).unwrap();
        assert!(bg.pieces().is_empty());
        assert!(BiGrading::new(1, [(idx(0, 0), Subspace::full(1)), (idx(0, 0), Subspace::full(1))]).is_err());
    }
}
