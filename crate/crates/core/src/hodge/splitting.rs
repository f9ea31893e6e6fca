use std::collections::HashMap;

use super::bigrading::BiGrading;
use super::filtration::{HodgeFiltration, MixedHodgeStructure, WeightFiltration};
use super::report::ValidationReport;
use crate::error::{Error, Result};
use crate::linalg::{LatticeIndex, Subspace};

/// Memoized `V^p_n = F^p ∩ W_n` and the truncated sums
/// `U^m_n = Σ_{j>=0} V^{m-j}_{n-j}`.
struct SplittingTables<'a> {
    w: &'a WeightFiltration,
    f: &'a HodgeFiltration,
    weight_floor: i64,
    v: HashMap<(i64, i64), Subspace>,
}

impl<'a> SplittingTables<'a> {
    fn v(&mut self, p: i64, n: i64) -> Result<Subspace> {
        if let Some(s) = self.v.get(&(p, n)) {
            return Ok(s.clone());
        }
        let s = self.f.get(p).intersect(self.w.get(n))?;
        self.v.insert((p, n), s.clone());
        Ok(s)
    }

    fn u(&mut self, m: i64, n: i64) -> Result<Subspace> {
        let mut acc = Subspace::zero(self.w.ambient_dim());
        // W_{n-j} vanishes once n-j drops below the lowest weight.
        let mut j = 0;
        while n - j >= self.weight_floor {
            acc = acc.sum(&self.v(m - j, n - j)?)?;
            j += 1;
        }
        Ok(acc)
    }
}

/// The Deligne splitting `{I^{p,q}}` of a validated mixed Hodge structure.
///
/// Evaluated by the closed formula
/// `I^{p,q} = V^p_{p+q} ∩ (conj V^q_{p+q} + conj U^{q-1}_{p+q-2})`
/// over the rectangle spanned by the Hodge and weight ranges. The correction
/// sum starts at weight `p+q-2`, i.e. its `j`-th term is
/// `conj(F^{q-j}) ∩ W_{p+q-j-1}` for `j >= 1`.
pub fn deligne_splitting(mhs: &MixedHodgeStructure) -> Result<BiGrading> {
    if !mhs.is_validated() {
        return Err(Error::NotValidated);
    }
    let dim = mhs.ambient_dim();
    let (Some((wl, wh)), Some((fl, fh))) = (mhs.weight().range(), mhs.hodge().range()) else {
        return Ok(BiGrading::empty(dim));
    };
    let mut tables = SplittingTables {
        w: mhs.weight(),
        f: mhs.hodge(),
        weight_floor: wl,
        v: HashMap::new(),
    };
    let mut pieces = Vec::new();
    for n in wl..=wh {
        for p in fl..=fh {
            let q = n - p;
            let vp = tables.v(p, n)?;
            if vp.is_zero() {
                continue;
            }
            let opposite = tables.v(q, n)?.conj().sum(&tables.u(q - 1, n - 2)?.conj())?;
            let piece = vp.intersect(&opposite)?;
            if !piece.is_zero() {
                pieces.push((LatticeIndex::new(p, q), piece));
            }
        }
    }
    BiGrading::new(dim, pieces)
}

/// Check the defining identities of a Deligne splitting of `mhs`.
///
/// Each identity is recorded as its own check: `direct_sum`,
/// `weight_graded` (`W_n = ⊕_{p+q<=n} I^{p,q}`), `hodge_graded`
/// (`F^p = ⊕_{k>=p} I^{k,q}`), `conjugation_congruence`
/// (`I^{p,q} ≡ conj I^{q,p} mod D_{p-1,q-1}`, both containments),
/// `bifiltration_symmetry` (`D_{p,q} = conj D_{q,p}`) and
/// `weight_from_bifiltration` (`W_n = Σ_{p+q=n} D_{p,q}`).
pub fn verify_splitting(bg: &BiGrading, mhs: &MixedHodgeStructure) -> ValidationReport {
    let mut report = ValidationReport::default();
    if bg.ambient_dim() != mhs.ambient_dim() {
        report.record(
            "ambient_dimension",
            vec![format!(
                "bigrading lives in dimension {}, structure in {}",
                bg.ambient_dim(),
                mhs.ambient_dim()
            )],
        );
        return report;
    }
    // Subspace operations cannot fail below: all ambient dimensions agree.
    verify_inner(bg, mhs, &mut report).expect("ambient dimensions agree");
    report
}

fn widen(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> Option<(i64, i64)> {
    match (a, b) {
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
        (x, None) | (None, x) => x,
    }
}

fn verify_inner(bg: &BiGrading, mhs: &MixedHodgeStructure, report: &mut ValidationReport) -> Result<()> {
    let w = mhs.weight();
    let f = mhs.hodge();

    let failures = match bg.check_direct_sum() {
        Ok(()) => vec![],
        Err(e) => vec![e.to_string()],
    };
    report.record("direct_sum", failures);

    let mut failures = Vec::new();
    if let Some((lo, hi)) = widen(w.range(), bg.weight_bounds()) {
        for n in lo - 1..=hi + 1 {
            if bg.weight_step(n) != *w.get(n) {
                failures.push(format!("W_{n} differs from the sum of I^(p,q) with p+q<={n}"));
            }
        }
    }
    report.record("weight_graded", failures);

    let mut failures = Vec::new();
    if let Some((lo, hi)) = widen(f.range(), bg.p_bounds()) {
        for p in lo - 1..=hi + 1 {
            if bg.hodge_step(p) != *f.get(p) {
                failures.push(format!("F^{p} differs from the sum of I^(k,q) with k>={p}"));
            }
        }
    }
    report.record("hodge_graded", failures);

    let mut failures = Vec::new();
    let mut indices: Vec<LatticeIndex> = bg.pieces().keys().copied().collect();
    indices.extend(bg.pieces().keys().map(|i| i.swapped()));
    indices.sort();
    indices.dedup();
    for idx in &indices {
        let here = bg.piece(*idx);
        let mirror = bg.piece(idx.swapped()).conj();
        let lower = bg.bifiltration(idx.p - 1, idx.q - 1);
        if here.dim() != mirror.dim() {
            failures.push(format!(
                "dim I^{idx} = {} but dim I^{} = {}",
                here.dim(),
                idx.swapped(),
                mirror.dim()
            ));
        }
        if !mirror.sum(&lower)?.contains(&here)? {
            failures.push(format!("I^{idx} is not inside conj I^{} + D_{{p-1,q-1}}", idx.swapped()));
        }
        if !here.sum(&lower)?.contains(&mirror)? {
            failures.push(format!("conj I^{} is not inside I^{idx} + D_{{p-1,q-1}}", idx.swapped()));
        }
    }
    report.record("conjugation_congruence", failures);

    let mut failures = Vec::new();
    if let Some((lo, hi)) = bg.index_bounds() {
        for p in lo..=hi {
            for q in lo..=hi {
                if bg.bifiltration(p, q) != bg.bifiltration(q, p).conj() {
                    failures.push(format!("D_({p},{q}) != conj D_({q},{p})"));
                }
            }
        }
    }
    report.record("bifiltration_symmetry", failures);

    let mut failures = Vec::new();
    if let (Some((lo, hi)), Some((klo, khi))) = (widen(w.range(), bg.weight_bounds()), bg.index_bounds()) {
        for n in lo - 1..=hi + 1 {
            let parts: Vec<Subspace> = (klo..=khi).map(|p| bg.bifiltration(p, n - p)).collect();
            let total = Subspace::sum_all(bg.ambient_dim(), parts.iter())?;
            if total != *w.get(n) {
                failures.push(format!("W_{n} != sum of D_(p,q) with p+q={n}"));
            }
        }
    }
    report.record("weight_from_bifiltration", failures);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::bigrading_to_filtrations;
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

    fn running_example() -> MixedHodgeStructure {
        let e1 = span(2, vec![vec![g(1, 0), g(0, 0)]]);
        let f1 = span(2, vec![vec![g(0, 1), g(1, 0)]]);
        let w = WeightFiltration::new(2, [(0, e1.clone()), (1, e1), (2, Subspace::full(2))]).unwrap();
        let f = HodgeFiltration::new(2, [(0, Subspace::full(2)), (1, f1), (2, Subspace::zero(2))]).unwrap();
        MixedHodgeStructure::validated(w, f).unwrap()
    }

    #[test]
    fn running_example_splitting() {
        let mhs = running_example();
        let bg = deligne_splitting(&mhs).unwrap();
        let expected = BiGrading::new(
            2,
            [
                (idx(0, 0), span(2, vec![vec![g(1, 0), g(0, 0)]])),
                (idx(1, 1), span(2, vec![vec![g(0, 1), g(1, 0)]])),
            ],
        )
        .unwrap();
        assert_eq!(bg, expected);
        let report = verify_splitting(&bg, &mhs);
        assert!(report.passed(), "{:?}", report.failures());
        let (w, f) = bigrading_to_filtrations(&bg).unwrap();
        assert_eq!(&w, mhs.weight());
        assert_eq!(&f, mhs.hodge());
    }

    #[test]
    fn wrong_piece_breaks_hodge_identity() {
        let mhs = running_example();
        let bad = BiGrading::new(
            2,
            [
                (idx(0, 0), span(2, vec![vec![g(1, 0), g(0, 0)]])),
                (idx(1, 1), span(2, vec![vec![g(0, 0), g(1, 0)]])),
            ],
        )
        .unwrap();
        let report = verify_splitting(&bad, &mhs);
        assert!(report.check("direct_sum").unwrap().passed);
        assert!(!report.check("hodge_graded").unwrap().passed);
        assert!(!report.passed());
    }

    #[test]
    fn pure_weight_matches_hodge_decomposition() {
        // Weight 1 on C^2 with F^1 = span{(1, i)}: I^{1,0} = F^1, I^{0,1} = conj F^1.
        let v = span(2, vec![vec![g(1, 0), g(0, 1)]]);
        let w = WeightFiltration::pure(2, 1);
        let f = HodgeFiltration::new(2, [(0, Subspace::full(2)), (1, v.clone())]).unwrap();
        let mhs = MixedHodgeStructure::validated(w, f).unwrap();
        let bg = deligne_splitting(&mhs).unwrap();
        assert_eq!(bg.piece(idx(1, 0)), v);
        assert_eq!(bg.piece(idx(0, 1)), v.conj());
        assert_eq!(bg.pieces().len(), 2);
        assert!(verify_splitting(&bg, &mhs).passed());
    }

    #[test]
    fn empty_structure() {
        let mhs = MixedHodgeStructure::validated(
            WeightFiltration::new(0, []).unwrap(),
            HodgeFiltration::new(0, []).unwrap(),
        )
        .unwrap();
        let bg = deligne_splitting(&mhs).unwrap();
        assert!(bg.pieces().is_empty());
        assert!(verify_splitting(&bg, &mhs).passed());
    }

    #[test]
    fn requires_validation() {
        let mhs = running_example();
        let raw = MixedHodgeStructure::new(mhs.weight().clone(), mhs.hodge().clone()).unwrap();
        assert!(matches!(deligne_splitting(&raw), Err(Error::NotValidated)));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let report = verify_splitting(&BiGrading::empty(1), &running_example());
        assert!(!report.passed());
        assert!(report.check("ambient_dimension").is_some());
    }
}
