use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::correspondence::operator_filtrations;
use super::operator::SigmaOperator;
use crate::error::{Error, Result};
use crate::linalg::{LatticeIndex, Subspace};

/// Which index range the pseudo-reality condition is imposed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PseudoRealityMode {
    /// Pairs with `r + s >= p + q`.
    Weak,
    /// Pairs with `r >= p` or `s >= q`.
    Strong,
}

impl PseudoRealityMode {
    /// Whether the block `P_{r,s} (conj A - A) P_{p,q}` must vanish.
    pub fn requires(self, rs: LatticeIndex, pq: LatticeIndex) -> bool {
        match self {
            PseudoRealityMode::Weak => rs.weight() >= pq.weight(),
            PseudoRealityMode::Strong => rs.p >= pq.p || rs.q >= pq.q,
        }
    }
}

impl fmt::Display for PseudoRealityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PseudoRealityMode::Weak => "weakly",
            PseudoRealityMode::Strong => "strongly",
        })
    }
}

impl FromStr for PseudoRealityMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "weak" => Ok(PseudoRealityMode::Weak),
            "strong" => Ok(PseudoRealityMode::Strong),
            other => Err(format!("unknown mode {other:?} (expected weak or strong)")),
        }
    }
}

/// An ordered pair `((r,s), (p,q))` with `P_{r,s} (conj A - A) P_{p,q} != 0`.
pub type Witness = (LatticeIndex, LatticeIndex);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudoRealityVerdict {
    pub mode: PseudoRealityMode,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

impl PseudoRealityVerdict {
    pub fn into_result(self) -> Result<()> {
        if self.holds {
            Ok(())
        } else {
            Err(Error::NotPseudoReal {
                mode: self.mode,
                witnesses: self.witnesses,
            })
        }
    }
}

/// Evaluate `P_{r,s} (conj A - A) P_{p,q} = 0` over the pairs the mode requires.
///
/// Indices outside the spectrum have zero projectors, so only spectrum pairs
/// are visited.
pub fn check_pseudo_real(op: &SigmaOperator, mode: PseudoRealityMode) -> PseudoRealityVerdict {
    let diff = &op.matrix().conj() - op.matrix();
    let mut witnesses = Vec::new();
    if !diff.is_zero() {
        let projectors = op.projectors();
        // (conj A - A) P_{p,q} is shared by every r,s.
        for (pq, p_right) in projectors {
            let right = &diff * p_right;
            if right.is_zero() {
                continue;
            }
            for (rs, p_left) in projectors {
                if mode.requires(*rs, *pq) && !(p_left * &right).is_zero() {
                    witnesses.push((*rs, *pq));
                }
            }
        }
    }
    witnesses.sort();
    PseudoRealityVerdict {
        mode,
        holds: witnesses.is_empty(),
        witnesses,
    }
}

fn check_dims(a: &SigmaOperator, b: &SigmaOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Index window outside of which every filtration involved is constant.
fn joint_bounds<'a>(keys: impl Iterator<Item = &'a LatticeIndex>, f: impl Fn(&LatticeIndex) -> [i64; 2]) -> Option<(i64, i64)> {
    let vals: Vec<i64> = keys.flat_map(f).collect();
    Some((*vals.iter().min()?, *vals.iter().max()?))
}

/// Same weight filtration, and `(a - b)(W_n) ⊆ W_{n-1}` for every `n`.
pub fn weakly_equivalent(a: &SigmaOperator, b: &SigmaOperator) -> Result<bool> {
    check_dims(a, b)?;
    let fa = operator_filtrations(a);
    let fb = operator_filtrations(b);
    if fa.weight != fb.weight {
        return Ok(false);
    }
    let diff = a.matrix() - b.matrix();
    let Some((lo, hi)) = joint_bounds(a.spectrum().keys(), |i| [i.weight(), i.weight()]) else {
        return Ok(true);
    };
    for n in lo..=hi + 1 {
        if !fa.weight.get(n - 1).contains(&fa.weight.get(n).image(&diff)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same bifiltration `D_{p,q}`, and `(a - b)(D_{p,q}) ⊆ D_{p-1,q-1}` for every `(p,q)`.
pub fn strongly_equivalent(a: &SigmaOperator, b: &SigmaOperator) -> Result<bool> {
    check_dims(a, b)?;
    let ga = a.bigrading();
    let gb = b.bigrading();
    let Some((lo, hi)) = joint_bounds(a.spectrum().keys().chain(b.spectrum().keys()), |i| [i.p, i.q]) else {
        return Ok(true);
    };
    let diff = a.matrix() - b.matrix();
    for p in lo - 1..=hi + 1 {
        for q in lo - 1..=hi + 1 {
            let d = ga.bifiltration(p, q);
            if d != gb.bifiltration(p, q) {
                return Ok(false);
            }
            let lower: Subspace = ga.bifiltration(p - 1, q - 1);
            if !lower.contains(&d.image(&diff)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
