//! Reference values from the theta-function representation of σ for the
//! square lattice with half-periods (1∓i)/2, evaluated at 30 digits.

use hodge_sigma::linalg::LatticeIndex;
use hodge_sigma::numeric::{sigma_eval, sigma_lambda_eval, sigma_prime_at, ComplexFloat, TruncationParams};

const REFERENCE: [((f64, f64), (f64, f64)); 3] = [
    ((1.0, 0.0), (1.182_951_300_500_129_3, 0.0)),
    ((0.5, 0.25), (0.492_729_150_959_452_1, 0.257_949_105_788_538_06)),
    ((3.0, 0.0), (-633.460_550_309_987_7, 0.0)),
];

const SIGMA_PRIME_AT_2: f64 = -23.140_692_632_779_27;

#[test]
fn truncated_product_within_its_bound() {
    for radius in [40, 80, 200] {
        let params = TruncationParams::new(radius, 0.05).unwrap();
        for ((x, y), (re, im)) in REFERENCE {
            let v = sigma_eval(ComplexFloat::new(x, y), &params).unwrap();
            let err = (v.value - ComplexFloat::new(re, im)).norm();
            assert!(err <= v.error_estimate, "N={radius} z={x}+{y}i: error {err:e} > bound {:e}", v.error_estimate);
        }
    }
}

#[test]
fn derivative_at_lattice_point() {
    for radius in [40, 200] {
        let params = TruncationParams::new(radius, 0.05).unwrap();
        let v = sigma_prime_at(LatticeIndex::new(1, 1), &params).unwrap();
        let err = (v.value - SIGMA_PRIME_AT_2).norm();
        assert!(err <= v.error_estimate, "N={radius}: error {err:e} > bound {:e}", v.error_estimate);
        // Away from the removable point the quotient path must agree.
        let near = sigma_lambda_eval(ComplexFloat::new(2.0, 0.6), LatticeIndex::new(1, 1), &params).unwrap();
        assert!(near.value.norm() > 1.0);
    }
}

#[test]
fn radius_40_gives_five_digits() {
    let v = sigma_eval(ComplexFloat::new(1.0, 0.0), &TruncationParams::default()).unwrap();
    let rel = (v.value.re - REFERENCE[0].1 .0).abs() / REFERENCE[0].1 .0;
    assert!(rel < 1e-4 && rel > 1e-8, "relative error {rel:e}");
}
