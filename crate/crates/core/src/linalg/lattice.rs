//! The period lattice `Z(1-i) + Z(1+i)` and its index coordinates.

use std::fmt;

use num::{BigInt, Integer, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::gaussian::GaussianRational;
use crate::error::{Error, Result};

/// Index `(p, q)` of the lattice point `p(1-i) + q(1+i)`.
///
/// Ordered lexicographically by `(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeIndex {
    pub p: i64,
    pub q: i64,
}

impl LatticeIndex {
    pub const fn new(p: i64, q: i64) -> Self {
        LatticeIndex { p, q }
    }

    /// The lattice value `(p+q) + (q-p)i`.
    pub fn embed(self) -> GaussianRational {
        GaussianRational::from_ints(self.p + self.q, self.q - self.p)
    }

    /// Inverse of [`embed`](Self::embed); fails for points outside the lattice.
    pub fn decode(g: &GaussianRational) -> Result<Self> {
        let not_in = || Error::NotInLattice(g.to_string());
        if !g.is_gaussian_integer() {
            return Err(not_in());
        }
        let re = g.re.to_integer();
        let im = g.im.to_integer();
        let diff: BigInt = &re - &im;
        let sum: BigInt = &re + &im;
        if diff.is_odd() {
            return Err(not_in());
        }
        let p = (diff / BigInt::from(2)).to_i64().ok_or_else(not_in)?;
        let q = (sum / BigInt::from(2)).to_i64().ok_or_else(not_in)?;
        Ok(LatticeIndex { p, q })
    }

    /// Weight `p + q`, the real part of the lattice value.
    pub fn weight(self) -> i64 {
        self.p + self.q
    }

    /// Index of the complex-conjugate lattice value.
    pub fn swapped(self) -> Self {
        LatticeIndex { p: self.q, q: self.p }
    }
}

impl From<(i64, i64)> for LatticeIndex {
    fn from((p, q): (i64, i64)) -> Self {
        LatticeIndex { p, q }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// True when `g` is a lattice point.
pub fn in_lattice(g: &GaussianRational) -> bool {
    LatticeIndex::decode(g).is_ok()
}
