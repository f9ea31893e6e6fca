use super::filtration::{HodgeFiltration, WeightFiltration};
use super::report::ValidationReport;
use crate::error::{Error, Result};
use crate::linalg::Subspace;

/// Check that `(W, F)` is a real mixed Hodge structure.
///
/// Purity of each `Gr^W_n` is tested upstairs in `C^n`: writing
/// `A = F^p ∩ W_n` and `B = conj(F^{n+1-p}) ∩ W_n`, the induced filtrations
/// on the graded piece are opposed iff `A + B + W_{n-1} = W_n` and
/// `A ∩ (B + W_{n-1}) ⊆ W_{n-1}` for every `p`.
pub fn validate_mhs(w: &WeightFiltration, f: &HodgeFiltration) -> Result<ValidationReport> {
    if w.ambient_dim() != f.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: w.ambient_dim(),
            found: f.ambient_dim(),
        });
    }
    let dim = w.ambient_dim();
    let mut report = ValidationReport::default();

    let w_steps: Vec<(i64, &Subspace)> = w.steps().collect();
    let f_steps: Vec<(i64, &Subspace)> = f.steps().collect();

    let mut failures = Vec::new();
    for pair in w_steps.windows(2) {
        let ((a, lower), (b, upper)) = (pair[0], pair[1]);
        if !upper.contains(lower)? {
            failures.push(format!("W_{a} is not contained in W_{b}"));
        }
    }
    report.record("weight_increasing", failures);

    let mut failures = Vec::new();
    let top_full = w_steps.last().map_or(dim == 0, |(_, s)| s.is_full());
    if !top_full {
        failures.push("top weight step is not the whole space".to_string());
    }
    report.record("weight_exhaustive", failures);

    let failures = w_steps
        .iter()
        .filter(|(_, s)| !s.is_real())
        .map(|(n, _)| format!("conj(W_{n}) != W_{n}"))
        .collect();
    report.record("weight_real", failures);

    let mut failures = Vec::new();
    for pair in f_steps.windows(2) {
        let ((a, upper), (b, lower)) = (pair[0], pair[1]);
        if !upper.contains(lower)? {
            failures.push(format!("F^{b} is not contained in F^{a}"));
        }
    }
    report.record("hodge_decreasing", failures);

    let mut failures = Vec::new();
    let bottom_full = f_steps.first().map_or(dim == 0, |(_, s)| s.is_full());
    if !bottom_full {
        failures.push("lowest Hodge step is not the whole space".to_string());
    }
    report.record("hodge_exhaustive", failures);

    let mut failures = Vec::new();
    if let Some((wl, wh)) = w.range() {
        let (fl, fh) = f.range().unwrap_or((0, 0));
        for n in wl..=wh {
            let wn = w.get(n);
            let below = w.get(n - 1);
            // The pair (F^p, F^{n+1-p}) is constant outside this window.
            let p_lo = fl.min(n - fh);
            let p_hi = (fh + 1).max(n + 1 - fl);
            for p in p_lo..=p_hi {
                let a = f.get(p).intersect(wn)?;
                let b = f.get(n + 1 - p).conj().intersect(wn)?;
                let b_plus = b.sum(below)?;
                if a.sum(&b_plus)? != *wn {
                    failures.push(format!(
                        "Gr_{n}: F^{p} + conj F^{} does not span",
                        n + 1 - p
                    ));
                }
                if !below.contains(&a.intersect(&b_plus)?)? {
                    failures.push(format!(
                        "Gr_{n}: F^{p} and conj F^{} intersect nontrivially",
                        n + 1 - p
                    ));
                }
            }
        }
    }
    report.record("graded_purity", failures);

    Ok(report)
}
