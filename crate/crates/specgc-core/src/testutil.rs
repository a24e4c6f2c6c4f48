//! Shared fixtures for the unit-test suites.

use crate::var::VarModel;

/// VAR(1) with channel 2 driving channel 1 and no feedback:
/// A_1 = [[0.5, 0.4], [0.0, 0.7]], Sigma = I.
pub(crate) fn coupled_fixture() -> VarModel {
    VarModel::new(
        vec![vec![vec![0.5, 0.4], vec![0.0, 0.7]]],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    )
    .unwrap()
}

/// Delayed coupling x_n = 0.8 y_{n-2} + e1, y white: VAR(2) with a single
/// nonzero entry in the second lag matrix.
pub(crate) fn delayed_coupling_fixture() -> VarModel {
    VarModel::new(
        vec![
            vec![vec![0.0, 0.0], vec![0.0, 0.0]],
            vec![vec![0.0, 0.8], vec![0.0, 0.0]],
        ],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    )
    .unwrap()
}

/// Scalar AR(1) with unit innovation variance.
pub(crate) fn ar1_fixture(a: f64) -> VarModel {
    VarModel::new(vec![vec![vec![a]]], vec![vec![1.0]]).unwrap()
}
