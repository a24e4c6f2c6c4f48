//! Scalar spectral factorization.
//!
//! Given a nonnegative density f on the grid with integrable log, the outer
//! factor f_+ with f = |f_+|^2 is computed by analytic completion of
//! (1/2) log f: take the one-sided part of the log's Fourier series and
//! exponentiate. On the grid this is the exact counterpart of the classical
//! Herglotz-kernel integral formula, at O(K log K) cost and with no kernel
//! singularity to dodge.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{fft_in_place, Direction};
use crate::grid::{coeffs_to_grid_scalar, FrequencyGrid};
use crate::psd::EIGEN_FLOOR_REL;

/// Default bound on the relative L1 reconstruction residual for smooth
/// analytic inputs; noisier spectra simply carry the reported residual.
pub const SCALAR_RESIDUAL_BOUND: f64 = 1e-6;
const PALEY_WIENER_MARGIN: f64 = 0.1;

/// Outer factor of a scalar density: one-sided coefficients c_n{f_+} with
/// c_0 real positive, plus the reconstruction residual on the grid.
#[derive(Debug, Clone)]
pub struct ScalarFactor {
    pub coeffs: Vec<Complex64>,
    /// Relative L1 grid error of |f_+|^2 against the input density, with
    /// f_+ rebuilt from the stored (truncated) coefficients.
    pub residual: f64,
    /// Set when the residual exceeds [`SCALAR_RESIDUAL_BOUND`].
    pub accuracy_warning: bool,
}

impl ScalarFactor {
    pub fn max_coeff(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Factorize a nonnegative density sampled on a power-of-two grid.
///
/// Steps: floor f away from zero, take l = log f, keep the analytic half of
/// its Fourier series g = l_0/2 + sum_{n=1}^{K/2-1} l_n e^{i n theta},
/// exponentiate, and read the first `max_coeff`+1 Fourier coefficients of
/// exp(g). The constant coefficient is exp(l_0 / 2) > 0, which is the
/// geometric-mean (outer) normalization.
pub fn scalar_factorize(f: &[f64], max_coeff: usize) -> Result<ScalarFactor> {
    let k = f.len();
    if k < 2 || !k.is_power_of_two() {
        return Err(Error::InvalidConfig(format!(
            "density must be sampled on a power-of-two grid, got {k} samples"
        )));
    }
    if max_coeff >= k / 2 {
        return Err(Error::GridTooCoarse {
            grid_size: k,
            max_coeff,
        });
    }
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("density contains non-finite samples".into()));
    }
    let max = f.iter().cloned().fold(0.0, f64::max);
    if f.iter().any(|&x| x < -1e-12 * max.max(f64::MIN_POSITIVE)) {
        return Err(Error::InvalidInput("density has negative samples".into()));
    }
    if max <= 0.0 || max.is_nan() {
        return Err(Error::NotFactorizable {
            log_det_mean: f64::NEG_INFINITY,
        });
    }

    let floor = EIGEN_FLOOR_REL * max;
    let logs: Vec<f64> = f.iter().map(|&x| x.max(floor).ln()).collect();
    let log_mean = logs.iter().sum::<f64>() / k as f64;
    let pw_floor = floor.ln() + PALEY_WIENER_MARGIN * (max.ln() - floor.ln());
    if log_mean <= pw_floor {
        return Err(Error::NotFactorizable {
            log_det_mean: log_mean,
        });
    }

    // Fourier coefficients of log f.
    let mut lhat: Vec<Complex64> = logs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft_in_place(&mut lhat, Direction::Forward);
    let scale = 1.0 / k as f64;

    // Analytic completion: half the constant, keep strictly positive
    // frequencies below Nyquist.
    let mut g = vec![Complex64::new(0.0, 0.0); k];
    g[0] = lhat[0] * (0.5 * scale);
    for n in 1..k / 2 {
        g[n] = lhat[n] * scale;
    }
    fft_in_place(&mut g, Direction::Inverse);
    let factor_on_grid: Vec<Complex64> = g.iter().map(|z| z.exp()).collect();

    let mut spectrum = factor_on_grid.clone();
    fft_in_place(&mut spectrum, Direction::Forward);
    let mut coeffs: Vec<Complex64> = spectrum[..=max_coeff].iter().map(|z| z * scale).collect();

    // c_0 = exp(l_0/2) is positive real up to round-off; pin the phase.
    let c0 = coeffs[0];
    if c0.norm() > 0.0 {
        let rot = c0.conj() / c0.norm();
        for c in coeffs.iter_mut() {
            *c *= rot;
        }
        coeffs[0] = Complex64::new(coeffs[0].re, 0.0);
    }

    let grid = FrequencyGrid::new(k)?;
    let rebuilt = coeffs_to_grid_scalar(&coeffs, &grid);
    let mut err = 0.0;
    let mut norm = 0.0;
    for (r, &orig) in rebuilt.iter().zip(f.iter()) {
        err += (r.norm_sqr() - orig).abs();
        norm += orig.abs();
    }
    let residual = err / norm;

    Ok(ScalarFactor {
        coeffs,
        residual,
        accuracy_warning: residual > SCALAR_RESIDUAL_BOUND,
    })
}
