//! L-lag prediction errors read off spectral factor coefficients.
//!
//! For an outer factor with coefficients c_0, c_1, ..., the L-lag error of
//! the full process is the root of the summed squared Frobenius norms of
//! the first L coefficients; predicting only a target group against the
//! whole past restricts the sum to the target rows. Errors are reported in
//! standard-deviation units.

use crate::error::{Error, Result};
use crate::matrix_factor::SpectralFactor;
use crate::scalar_factor::ScalarFactor;

/// Prediction error at a fixed lag, with a per-target-channel breakdown
/// whose squares sum to the squared value.
#[derive(Debug, Clone)]
pub struct PredictionError {
    pub lag: usize,
    pub value: f64,
    pub breakdown: Vec<f64>,
}

/// e = sqrt(sum_{n<L} |c_n|^2) for a scalar factor.
pub fn scalar_prediction_error(factor: &ScalarFactor, lag: usize) -> Result<PredictionError> {
    check_lag(lag, factor.coeffs.len())?;
    let value2: f64 = factor.coeffs[..lag].iter().map(|c| c.norm_sqr()).sum();
    let value = value2.sqrt();
    Ok(PredictionError {
        lag,
        value,
        breakdown: vec![value],
    })
}

/// Joint error of all channels: Frobenius mass of the first L coefficients.
pub fn joint_prediction_error(factor: &SpectralFactor, lag: usize) -> Result<PredictionError> {
    let all: Vec<usize> = (0..factor.dim()).collect();
    grouped_prediction_error(factor, &all, lag)
}

/// Error of predicting the target group from the past of all channels:
/// squared row norms of the first L coefficients, restricted to target rows.
pub fn grouped_prediction_error(
    factor: &SpectralFactor,
    target_channels: &[usize],
    lag: usize,
) -> Result<PredictionError> {
    check_lag(lag, factor.coeffs().len())?;
    if target_channels.is_empty() {
        return Err(Error::InvalidGroup("empty target set".into()));
    }
    let d = factor.dim();
    let mut seen = vec![false; d];
    for &j in target_channels {
        if j >= d {
            return Err(Error::InvalidGroup(format!(
                "target channel {j} out of range for dimension {d}"
            )));
        }
        if seen[j] {
            return Err(Error::InvalidGroup(format!("duplicate target channel {j}")));
        }
        seen[j] = true;
    }
    let mut breakdown = Vec::with_capacity(target_channels.len());
    let mut value2 = 0.0;
    for &j in target_channels {
        let mut row2 = 0.0;
        for c in &factor.coeffs()[..lag] {
            for k in 0..d {
                row2 += c.at(j, k).norm_sqr();
            }
        }
        breakdown.push(row2.sqrt());
        value2 += row2;
    }
    Ok(PredictionError {
        lag,
        value: value2.sqrt(),
        breakdown,
    })
}

fn check_lag(lag: usize, available: usize) -> Result<()> {
    if lag == 0 {
        return Err(Error::InvalidConfig("lag must be at least 1".into()));
    }
    if lag > available {
        return Err(Error::InsufficientCoefficients {
            available,
            requested: lag,
        });
    }
    Ok(())
}
