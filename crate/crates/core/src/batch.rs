//! Evaluation of independent instances, in parallel when the `parallel`
//! feature is enabled.

use serde::Serialize;

use crate::error::Result;
use crate::generator::{random_mhs, GenProfile};
use crate::hodge::{deligne_splitting, hodge_numbers, verify_splitting};
use crate::sigma::{mhs_from_operator, operator_from_mhs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    /// Falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
}

/// `items.map(f)` in input order.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Outcome of one mixed Hodge structure → operator → structure → operator cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    pub seed: u64,
    pub dim: usize,
    /// The structure read back from the operator equals the original.
    pub structure_exact: bool,
    /// The operator rebuilt from that structure equals the first operator.
    pub operator_exact: bool,
    /// The Deligne splitting passes every identity check.
    pub splitting_verified: bool,
    /// `dim I^{p,q} = dim I^{q,p}` everywhere.
    pub hodge_symmetric: bool,
}

impl RoundTrip {
    pub fn passed(&self) -> bool {
        self.structure_exact && self.operator_exact && self.splitting_verified && self.hodge_symmetric
    }
}

/// One round trip on `random_mhs(profile)`.
pub fn round_trip(profile: &GenProfile) -> Result<RoundTrip> {
    let mhs = random_mhs(profile)?;
    let bg = deligne_splitting(&mhs)?;
    let numbers = hodge_numbers(&bg);
    let hodge_symmetric = numbers
        .iter()
        .all(|(idx, d)| numbers.get(&idx.swapped()) == Some(d));
    let op = operator_from_mhs(&mhs)?;
    let back = mhs_from_operator(&op)?.mhs;
    let again = operator_from_mhs(&back)?;
    Ok(RoundTrip {
        seed: profile.seed(),
        dim: mhs.ambient_dim(),
        structure_exact: back == mhs,
        operator_exact: again.matrix() == op.matrix(),
        splitting_verified: verify_splitting(&bg, &mhs).passed(),
        hodge_symmetric,
    })
}

/// Round trips for `count` consecutive seeds starting at the profile's.
pub fn round_trips(profile: &GenProfile, count: usize, strategy: Strategy) -> Vec<Result<RoundTrip>> {
    let seeds: Vec<u64> = (0..count as u64).map(|k| profile.seed().wrapping_add(k)).collect();
    map(strategy, &seeds, |s| round_trip(&profile.with_seed(*s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::LatticeIndex;

    #[test]
    fn strategies_agree() {
        let xs: Vec<u64> = (0..100).collect();
        let a = map(Strategy::Sequential, &xs, |x| x * x);
        let b = map(Strategy::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
    }

    #[test]
    fn round_trips_pass() {
        let p = GenProfile::new(
            [(LatticeIndex::new(0, 0), 1), (LatticeIndex::new(1, 1), 1), (LatticeIndex::new(1, 0), 1), (LatticeIndex::new(0, 1), 1)],
            2,
            40,
        )
        .unwrap();
        for r in round_trips(&p, 4, Strategy::Parallel) {
            assert!(r.unwrap().passed());
        }
    }
}
