//! Subspaces of `C^n` in canonical reduced column-echelon form.
//!
//! Every subspace is stored by a basis whose columns have leading entry one
//! in strictly increasing rows, with zeros in every other pivot row. Two
//! generating sets of the same space therefore produce identical bases, so
//! equality of [`Subspace`] values is equality of spaces.

use num::Zero;

use super::gaussian::GaussianRational;
use super::matrix::{rref, Matrix, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Canonical span of the given vectors.
    pub fn span<I>(ambient_dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut rows: Vec<Vector> = Vec::new();
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_zero()) {
                rows.push(v);
            }
        }
        let pivots = rref(&mut rows, ambient_dim);
        rows.truncate(pivots.len());
        let basis = Matrix::from_columns(ambient_dim, &rows)?;
        Ok(Subspace {
            ambient_dim,
            basis,
            pivots,
        })
    }

    /// Canonical span of the columns of `m`.
    pub fn column_span(m: &Matrix) -> Self {
        Self::span(m.rows(), m.columns()).expect("columns share the row count")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// The canonical basis as an `ambient_dim x dim` matrix.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vector> {
        self.basis.columns()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: n,
            });
        }
        Ok(())
    }

    /// Residue of `v` after eliminating every pivot coordinate; zero iff `v` lies in the span.
    pub(crate) fn reduce(&self, v: &[GaussianRational]) -> Vector {
        let mut out = v.to_vec();
        for (j, &r) in self.pivots.iter().enumerate() {
            if out[r].is_zero() {
                continue;
            }
            let coef = out[r].clone();
            for (i, o) in out.iter_mut().enumerate() {
                let b = &self.basis[(i, j)];
                if !b.is_zero() {
                    *o -= &(&coef * b);
                }
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[GaussianRational]) -> Result<bool> {
        self.check_dim(v.len())?;
        Ok(self.reduce(v).iter().all(Zero::is_zero))
    }

    /// True iff `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_dim(other.ambient_dim)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        for v in other.vectors() {
            if !self.reduce(&v).iter().all(Zero::is_zero) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_dim(other.ambient_dim)?;
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_full() {
            return Ok(other.clone());
        }
        Subspace::span(
            self.ambient_dim,
            self.vectors().into_iter().chain(other.vectors()),
        )
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_dim(other.ambient_dim)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        // x = U c lies in W iff its residue modulo W vanishes; the residue is linear in c.
        let residues: Vec<Vector> = self.vectors().iter().map(|u| other.reduce(u)).collect();
        let constraint = Matrix::from_columns(self.ambient_dim, &residues)?;
        let coeffs = constraint.kernel();
        Subspace::span(
            self.ambient_dim,
            coeffs.vectors().iter().map(|c| self.basis.mul_vec(c)),
        )
    }

    /// Entrywise complex conjugate of the subspace.
    pub fn conj(&self) -> Subspace {
        // Pivots are real, so conjugating a reduced echelon basis keeps it reduced.
        Subspace {
            ambient_dim: self.ambient_dim,
            basis: self.basis.conj(),
            pivots: self.pivots.clone(),
        }
    }

    /// Stable under conjugation.
    pub fn is_real(&self) -> bool {
        self.basis.is_real()
    }

    /// Image `m(self)` of the subspace under a square matrix.
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        self.check_dim(m.cols())?;
        Subspace::span(m.rows(), self.vectors().iter().map(|v| m.mul_vec(v)))
    }

    /// Sum of many subspaces of `C^n`.
    pub fn sum_all<'a, I>(ambient_dim: usize, parts: I) -> Result<Subspace>
    where
        I: IntoIterator<Item = &'a Subspace>,
    {
        let mut vectors = Vec::new();
        for s in parts {
            if s.ambient_dim != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: s.ambient_dim,
                });
            }
            vectors.extend(s.vectors());
        }
        Subspace::span(ambient_dim, vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::from_ints(a, b)
    }

    fn e(n: usize, k: usize) -> Vector {
        (0..n).map(|i| g((i == k) as i64, 0)).collect()
    }

    fn span(n: usize, vs: Vec<Vector>) -> Subspace {
        Subspace::span(n, vs).unwrap()
    }

    #[test]
    fn sum_examples() {
        let e1 = span(2, vec![e(2, 0)]);
        let e2 = span(2, vec![e(2, 1)]);
        assert_eq!(e1.sum(&e2).unwrap(), Subspace::full(2));
        assert_eq!(e1.sum(&Subspace::zero(2)).unwrap(), e1);
        let diag = span(2, vec![vec![g(1, 0), g(1, 0)]]);
        assert_eq!(e1.sum(&diag).unwrap(), Subspace::full(2));
        assert!(e1.sum(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn intersect_examples() {
        let e1 = span(2, vec![e(2, 0)]);
        let e2 = span(2, vec![e(2, 1)]);
        assert_eq!(e1.intersect(&e2).unwrap(), Subspace::zero(2));
        assert_eq!(e1.intersect(&Subspace::full(2)).unwrap(), e1);
        let a = span(3, vec![e(3, 0), e(3, 1)]);
        let b = span(3, vec![e(3, 1), e(3, 2)]);
        assert_eq!(a.intersect(&b).unwrap(), span(3, vec![e(3, 1)]));
        assert!(a.intersect(&Subspace::zero(2)).is_err());
    }

    #[test]
    fn conj_examples() {
        let s = span(2, vec![vec![g(1, 0), g(0, 1)]]);
        assert_eq!(s.conj(), span(2, vec![vec![g(1, 0), g(0, -1)]]));
        let r = span(2, vec![vec![g(1, 0), g(3, 0)]]);
        assert_eq!(r.conj(), r);
        let ie1 = span(2, vec![vec![g(0, 1), g(0, 0)]]);
        assert_eq!(ie1.conj(), ie1);
        assert_eq!(ie1.basis().column(0), vec![g(1, 0), g(0, 0)]);
    }

    #[test]
    fn contains_examples() {
        let e1 = span(2, vec![e(2, 0)]);
        let e2 = span(2, vec![e(2, 1)]);
        assert!(Subspace::full(2).contains(&e1).unwrap());
        assert!(Subspace::zero(2).contains(&Subspace::zero(2)).unwrap());
        assert!(!e1.contains(&e2).unwrap());
        assert!(e1.contains(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn zero_dimensional_ambient() {
        let z = Subspace::zero(0);
        assert_eq!(z, Subspace::full(0));
        assert_eq!(z.sum(&z).unwrap(), z);
        assert_eq!(z.intersect(&z).unwrap(), z);
    }

    fn small_vector(n: usize) -> impl Strategy<Value = Vector> {
        prop::collection::vec((-3i64..=3, -3i64..=3), n)
            .prop_map(|v| v.into_iter().map(|(a, b)| g(a, b)).collect())
    }

    fn small_subspace(n: usize) -> impl Strategy<Value = Subspace> {
        prop::collection::vec(small_vector(n), 0..=n).prop_map(move |vs| span(n, vs))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn canonical_form_is_generator_independent(
            vs in prop::collection::vec(small_vector(4), 1..4),
            mix in prop::collection::vec((-2i64..=2, -2i64..=2), 9),
        ) {
            let s = span(4, vs.clone());
            // Append combinations of the generators and shuffle the order.
            let mut gens = vs.clone();
            for (k, (a, b)) in mix.iter().enumerate() {
                let src = &vs[k % vs.len()];
                let c = g(*a, *b);
                gens.push(src.iter().map(|x| x * &c).collect());
            }
            gens.reverse();
            prop_assert_eq!(span(4, gens), s);
        }

        #[test]
        fn dimension_formula(u in small_subspace(4), w in small_subspace(4)) {
            let sum = u.sum(&w).unwrap();
            let cap = u.intersect(&w).unwrap();
            prop_assert_eq!(u.dim() + w.dim(), sum.dim() + cap.dim());
            prop_assert!(sum.contains(&u).unwrap() && sum.contains(&w).unwrap());
            prop_assert!(u.contains(&cap).unwrap() && w.contains(&cap).unwrap());
        }

        #[test]
        fn conjugation_commutes(u in small_subspace(3), w in small_subspace(3)) {
            prop_assert_eq!(u.conj().conj(), u.clone());
            prop_assert_eq!(u.sum(&w).unwrap().conj(), u.conj().sum(&w.conj()).unwrap());
            prop_assert_eq!(u.intersect(&w).unwrap().conj(), u.conj().intersect(&w.conj()).unwrap());
        }
    }
}
