#![allow(dead_code)]

use hodge_sigma::generator::GenProfile;
use hodge_sigma::hodge::{HodgeFiltration, MixedHodgeStructure, WeightFiltration};
use hodge_sigma::linalg::{GaussianRational, LatticeIndex, Matrix, Subspace};

pub fn g(a: i64, b: i64) -> GaussianRational {
    GaussianRational::from_ints(a, b)
}

pub fn idx(p: i64, q: i64) -> LatticeIndex {
    LatticeIndex::new(p, q)
}

pub fn span(n: usize, vs: Vec<Vec<GaussianRational>>) -> Subspace {
    Subspace::span(n, vs).unwrap()
}

pub fn profile(dims: &[((i64, i64), usize)], seed: u64) -> GenProfile {
    GenProfile::new(dims.iter().map(|&((p, q), d)| (idx(p, q), d)), 2, seed).unwrap()
}

/// Mixed profiles, total dimension 2 to 8.
pub fn mixed_profiles() -> Vec<Vec<((i64, i64), usize)>> {
    vec![
        vec![((0, 0), 1), ((1, 1), 1)],
        vec![((1, 0), 1), ((0, 1), 1), ((1, 1), 1)],
        vec![((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 1)],
        vec![((-1, -1), 1), ((-1, 0), 1), ((0, -1), 1), ((0, 0), 2)],
        vec![((0, 0), 1), ((2, 0), 1), ((0, 2), 1), ((1, 1), 2), ((2, 2), 1)],
        vec![((0, 0), 2), ((1, 0), 1), ((0, 1), 1), ((2, 1), 1), ((1, 2), 1), ((2, 2), 2)],
    ]
}

/// Profiles with a single weight.
pub fn pure_profiles() -> Vec<Vec<((i64, i64), usize)>> {
    vec![
        vec![((0, 0), 3)],
        vec![((1, 0), 1), ((0, 1), 1)],
        vec![((2, 0), 1), ((1, 1), 2), ((0, 2), 1)],
        vec![((3, 0), 1), ((2, 1), 1), ((1, 2), 1), ((0, 3), 1)],
        vec![((1, 0), 2), ((0, 1), 2)],
    ]
}

/// `W_0 = span{e1}`, `W_2 = C^2`, `F^1 = span{(i, 1)}`.
pub fn running_example() -> MixedHodgeStructure {
    let e1 = span(2, vec![vec![g(1, 0), g(0, 0)]]);
    let f1 = span(2, vec![vec![g(0, 1), g(1, 0)]]);
    let w = WeightFiltration::new(2, [(0, e1), (2, Subspace::full(2))]).unwrap();
    let f = HodgeFiltration::new(2, [(0, Subspace::full(2)), (1, f1)]).unwrap();
    MixedHodgeStructure::validated(w, f).unwrap()
}

pub fn fixture_a() -> Matrix {
    Matrix::from_int_pairs(&[&[(0, 0), (0, 2)], &[(0, 0), (2, 0)]])
}

pub fn a1() -> Matrix {
    Matrix::from_int_pairs(&[
        &[(1, 0), (-1, 0), (0, 0)],
        &[(1, 0), (1, 0), (0, 0)],
        &[(0, 0), (0, 0), (2, 0)],
    ])
}

pub fn a2() -> Matrix {
    Matrix::from_int_pairs(&[
        &[(1, 0), (-1, 0), (1, 1)],
        &[(1, 0), (1, 0), (-1, 1)],
        &[(0, 0), (0, 0), (2, 0)],
    ])
}
