//! Property tests for the algebraic invariants of the public API.

use num_complex::Complex64;
use proptest::prelude::*;

use specgc_core::grid::{coeffs_to_grid, grid_to_coeffs, FrequencyGrid};
use specgc_core::mat::CMat;
use specgc_core::matrix_factor::SpectralFactor;
use specgc_core::prediction::{grouped_prediction_error, joint_prediction_error};
use specgc_core::psd::{check_paley_wiener, SpectralDensityMatrix};
use specgc_core::scalar_factor::scalar_factorize;

fn cmat_strategy(d: usize) -> impl Strategy<Value = CMat> {
    proptest::collection::vec(
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d),
        d,
    )
    .prop_map(|rows| {
        CMat::from_rows(
            &rows
                .into_iter()
                .map(|r| r.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
                .collect::<Vec<_>>(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_transforms_round_trip_matrix_polynomials(
        coeffs in proptest::collection::vec(cmat_strategy(2), 1..6)
    ) {
        let grid = FrequencyGrid::new(256).unwrap();
        let values = coeffs_to_grid(&coeffs, &grid);
        let back = grid_to_coeffs(&values, coeffs.len() - 1).unwrap();
        for (a, b) in back.iter().zip(&coeffs) {
            let scale = b.frob_norm().max(1.0);
            prop_assert!(a.sub(b).frob_norm() / scale < 1e-12);
        }
    }

    #[test]
    fn scalar_factorization_is_scaling_equivariant(
        a1 in -0.45f64..0.45,
        a2 in -0.2f64..0.2,
        lambda in 0.1f64..10.0
    ) {
        let grid = FrequencyGrid::new(256).unwrap();
        let f: Vec<f64> = grid
            .thetas()
            .map(|t| 1.0 + a1 * t.cos() + a2 * (2.0 * t).cos())
            .collect();
        prop_assume!(f.iter().all(|&x| x > 0.01));
        let base = scalar_factorize(&f, 32).unwrap();
        let scaled_density: Vec<f64> = f.iter().map(|x| lambda * lambda * x).collect();
        let scaled = scalar_factorize(&scaled_density, 32).unwrap();
        for (a, b) in base.coeffs.iter().zip(&scaled.coeffs) {
            prop_assert!((a * lambda - b).norm() < 1e-9 * lambda.max(1.0));
        }
    }

    #[test]
    fn prediction_errors_are_monotone_and_consistent(
        coeffs in proptest::collection::vec(cmat_strategy(3), 2..10)
    ) {
        let factor = SpectralFactor::new(coeffs, 0.0);
        let mut prev = 0.0;
        for lag in 1..=factor.coeffs().len() {
            let joint = joint_prediction_error(&factor, lag).unwrap();
            prop_assert!(joint.value >= prev - 1e-12);
            prev = joint.value;
            // grouped over all channels is exactly the joint error
            let grouped = grouped_prediction_error(&factor, &[0, 1, 2], lag).unwrap();
            prop_assert!((grouped.value - joint.value).abs() == 0.0);
            // breakdown squares sum to the squared value
            let sum2: f64 = joint.breakdown.iter().map(|b| b * b).sum();
            prop_assert!((sum2 - joint.value * joint.value).abs() < 1e-10 * (1.0 + sum2));
        }
    }

    #[test]
    fn paley_wiener_mean_shifts_additively_under_scaling(
        lambda in 0.01f64..100.0,
        bump in 0.0f64..2.0
    ) {
        let grid = FrequencyGrid::new(128).unwrap();
        let values: Vec<CMat> = grid
            .thetas()
            .map(|t| CMat::diag(&[1.5 + bump * t.cos().abs(), 2.0]))
            .collect();
        let scaled: Vec<CMat> = values.iter().map(|v| v.scale_re(lambda)).collect();
        let s1 = SpectralDensityMatrix::new(grid, values).unwrap();
        let s2 = SpectralDensityMatrix::new(grid, scaled).unwrap();
        let p1 = check_paley_wiener(&s1, None);
        let p2 = check_paley_wiener(&s2, None);
        prop_assert!(p1.satisfied && p2.satisfied);
        let shift = 2.0 * lambda.ln();
        prop_assert!((p2.log_det_mean - p1.log_det_mean - shift).abs() < 1e-9);
    }
}
