mod common;

use common::*;
use hodge_sigma::generator::{perturb_bigrading, random_mhs, random_sigma_operator, random_split_bigrading, Flavor};
use hodge_sigma::hodge::{bigrading_to_filtrations, deligne_splitting, hodge_numbers, verify_splitting, MixedHodgeStructure};
use hodge_sigma::linalg::GaussianRational;
use hodge_sigma::numeric::{sigma_eval, ComplexFloat, TruncationParams};
use hodge_sigma::sigma::{
    certify_sigma_operator, check_pseudo_real, conj_correction, mhs_from_operator, operator_from_mhs,
    operator_of_bigrading, strongly_equivalent, weakly_equivalent, PseudoRealityMode,
};
use proptest::prelude::*;

fn any_profile() -> impl Strategy<Value = Vec<((i64, i64), usize)>> {
    let all: Vec<_> = mixed_profiles().into_iter().chain(pure_profiles()).collect();
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn any_flavor() -> impl Strategy<Value = Flavor> {
    prop_oneof![Just(Flavor::Real), Just(Flavor::Strong), Just(Flavor::WeakOnly)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn splitting_of_split_filtrations_is_the_grading(dims in any_profile(), seed in any::<u64>()) {
        let bg = random_split_bigrading(&profile(&dims, seed)).unwrap();
        let (w, f) = bigrading_to_filtrations(&bg).unwrap();
        let mhs = MixedHodgeStructure::validated(w, f).unwrap();
        prop_assert_eq!(deligne_splitting(&mhs).unwrap(), bg);
    }

    #[test]
    fn perturbed_gradings_round_trip(dims in any_profile(), seed in any::<u64>()) {
        let p = profile(&dims, seed);
        let bg = perturb_bigrading(&random_split_bigrading(&p).unwrap(), &p).unwrap();
        let (w, f) = bigrading_to_filtrations(&bg).unwrap();
        let mhs = MixedHodgeStructure::validated(w, f).unwrap();
        let split = deligne_splitting(&mhs).unwrap();
        prop_assert_eq!(&split, &bg);
        prop_assert!(verify_splitting(&split, &mhs).passed());
        let numbers = hodge_numbers(&split);
        prop_assert_eq!(numbers.values().sum::<usize>(), p.total_dim());
    }

    #[test]
    fn mhs_operator_mhs(dims in any_profile(), seed in any::<u64>()) {
        let mhs = random_mhs(&profile(&dims, seed)).unwrap();
        let op = operator_from_mhs(&mhs).unwrap();
        prop_assert!(check_pseudo_real(&op, PseudoRealityMode::Strong).holds);
        prop_assert_eq!(mhs_from_operator(&op).unwrap().mhs, mhs.clone());
        let bg = deligne_splitting(&mhs).unwrap();
        prop_assert_eq!(op.bigrading(), bg.clone());
        prop_assert_eq!(operator_of_bigrading(&bg).unwrap(), op.matrix().clone());
    }

    #[test]
    fn conjugate_operator_swaps_pieces(dims in any_profile(), seed in any::<u64>(), flavor in any_flavor()) {
        let Ok(m) = random_sigma_operator(&profile(&dims, seed), flavor) else {
            return Ok(());
        };
        let op = certify_sigma_operator(&m).unwrap();
        let bar = certify_sigma_operator(&m.conj()).unwrap();
        for (idx, space) in op.spectrum() {
            prop_assert_eq!(bar.eigenspace(idx.swapped()), space.conj());
        }
        prop_assert_eq!(bar.conj().matrix().clone(), m);
    }

    #[test]
    fn modes_are_ordered_and_match_equivalences(dims in any_profile(), seed in any::<u64>(), flavor in any_flavor()) {
        let Ok(m) = random_sigma_operator(&profile(&dims, seed), flavor) else {
            return Ok(());
        };
        let op = certify_sigma_operator(&m).unwrap();
        let weak = check_pseudo_real(&op, PseudoRealityMode::Weak).holds;
        let strong = check_pseudo_real(&op, PseudoRealityMode::Strong).holds;
        prop_assert!(!strong || weak);
        prop_assert_eq!(weak, weakly_equivalent(&op, &op.conj()).unwrap());
        prop_assert_eq!(strong, strongly_equivalent(&op, &op.conj()).unwrap());
        prop_assert!(strongly_equivalent(&op, &op).unwrap());
        match flavor {
            Flavor::Real => prop_assert!(m.is_real() && strong),
            Flavor::Strong => prop_assert!(strong),
            Flavor::WeakOnly => prop_assert!(weak && !strong),
        }
    }

    #[test]
    fn correction_lands_in_conjugate_eigenspace(dims in any_profile(), seed in any::<u64>()) {
        let m = random_sigma_operator(&profile(&dims, seed), Flavor::Strong).unwrap();
        let op = certify_sigma_operator(&m).unwrap();
        let bar = m.conj();
        for (idx, space) in op.spectrum() {
            let lambda = idx.embed();
            for x in space.vectors() {
                let u = conj_correction(&op, *idx, &x).unwrap();
                let y: Vec<GaussianRational> = x.iter().zip(&u).map(|(a, b)| a + b).collect();
                let lhs = bar.mul_vec(&y);
                let rhs: Vec<GaussianRational> = y.iter().map(|v| v * &lambda).collect();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn sigma_is_odd_and_rotation_equivariant(re in -2.5f64..2.5, im in -2.5f64..2.5) {
        let params = TruncationParams::default();
        let z = ComplexFloat::new(re, im);
        let s = sigma_eval(z, &params).unwrap().value;
        let i = ComplexFloat::new(0.0, 1.0);
        let scale = s.norm().max(1.0);
        prop_assert!((sigma_eval(-z, &params).unwrap().value + s).norm() < 1e-9 * scale);
        prop_assert!((sigma_eval(i * z, &params).unwrap().value - i * s).norm() < 1e-9 * scale);
        prop_assert!((sigma_eval(z.conj(), &params).unwrap().value - s.conj()).norm() < 1e-9 * scale);
    }
}

#[test]
fn weak_equivalence_is_not_injective() {
    let op1 = certify_sigma_operator(&a1()).unwrap();
    let op2 = certify_sigma_operator(&a2()).unwrap();
    assert!(weakly_equivalent(&op1, &op2).unwrap());
    assert!(!strongly_equivalent(&op1, &op2).unwrap());
    assert_eq!(mhs_from_operator(&op1).unwrap().mhs, mhs_from_operator(&op2).unwrap().mhs);
}

#[test]
fn running_example_operator() {
    let op = operator_from_mhs(&running_example()).unwrap();
    assert_eq!(op.matrix(), &fixture_a());
    assert!(op.matrix().conj() != fixture_a());
}
