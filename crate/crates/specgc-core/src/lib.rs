//! Wiener-Granger causality for multichannel time series by the spectral
//! route: estimate the power spectral density matrix, factorize it as
//! S = S_+ S_+^*, and read L-lag prediction errors off the Fourier
//! coefficients of the outer factor.
//!
//! The crate is organized around that pipeline:
//!
//! - [`grid`], [`series`], [`acov`], [`psd`]: shared domain types, the
//!   frequency grid, and transforms between grid samples and coefficient
//!   sequences.
//! - [`estimation`]: spectral density and autocovariance estimators
//!   (Welch, Blackman-Tukey, multitaper) plus analytic VAR fixtures in
//!   [`var`].
//! - [`scalar_factor`] / [`matrix_factor`]: spectral factorization.
//! - [`prediction`] / [`causality`]: prediction errors and causality
//!   indices.
//! - [`oracle`]: finite-history least squares and seeded simulation, kept
//!   free of Fourier analysis so it can independently check everything
//!   above.

// index arithmetic over matrix entries reads better than iterator chains
#![allow(clippy::needless_range_loop)]

pub mod acov;
pub mod causality;
pub mod dpss;
pub mod error;
pub mod estimation;
pub mod fft;
pub mod grid;
pub mod mat;
pub mod matrix_factor;
pub mod oracle;
pub mod prediction;
pub mod psd;
pub mod scalar_factor;
pub mod series;
pub mod var;

#[cfg(test)]
pub(crate) mod testutil;

pub use acov::AutocovarianceSequence;
pub use causality::{
    analyze_grouping, causality_index, lag_profile, significance_flag, CausalityIndex,
    CausalityReport, GroupAnalysis, GroupSpec, GroupingResult, IndexEntry,
    REPORT_SCHEMA_VERSION,
};
pub use error::{Error, Result};
pub use estimation::{
    estimate_autocovariance, estimate_psd, EstimationMethod, EstimatorConfig,
};
pub use grid::{coeffs_to_grid, grid_to_coeffs, FrequencyGrid, DEFAULT_GRID_SIZE};
pub use mat::CMat;
pub use matrix_factor::{
    factor_residual, matrix_factorize, wilson_factorize, FactorizationConfig, SpectralFactor,
};
pub use oracle::{finite_history_error, simulate_var, FiniteHistoryError, SplitMix64};
pub use prediction::{
    grouped_prediction_error, joint_prediction_error, scalar_prediction_error, PredictionError,
};
pub use psd::{check_paley_wiener, PaleyWienerCheck, SpectralDensityMatrix};
pub use scalar_factor::{scalar_factorize, ScalarFactor};
pub use series::{Detrend, MultichannelSeries};
pub use var::{var_autocovariance, var_psd, VarModel};
