//! Uniform frequency grid on [0, 2*pi) and transforms between grid samples
//! and one-sided Fourier coefficient sequences.
//!
//! Grid averages stand in for (1/2pi) times the circle integral throughout,
//! so the zeroth coefficient of a white-noise spectrum is the process
//! variance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{fft_in_place, Direction};
use crate::mat::CMat;

/// K equispaced points theta_k = 2 pi k / K; K is a power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrequencyGrid {
    size: usize,
}

pub const DEFAULT_GRID_SIZE: usize = 1024;

impl FrequencyGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 || !size.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "grid size must be a power of two >= 2, got {size}"
            )));
        }
        Ok(FrequencyGrid { size })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn theta(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / self.size as f64
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.size).map(move |k| self.theta(k))
    }
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        FrequencyGrid {
            size: DEFAULT_GRID_SIZE,
        }
    }
}

/// One-sided Fourier coefficients c_n = (1/K) sum_k f(theta_k) e^{-i n theta_k}
/// for n = 0..=max_coeff, computed entrywise for matrix samples.
///
/// Exact for trigonometric polynomials of degree < K - max_coeff.
pub fn grid_to_coeffs(values: &[CMat], max_coeff: usize) -> Result<Vec<CMat>> {
    let k = values.len();
    if max_coeff >= k {
        return Err(Error::GridTooCoarse {
            grid_size: k,
            max_coeff,
        });
    }
    let d = values[0].dim();
    let mut out = vec![CMat::zeros(d); max_coeff + 1];
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    for i in 0..d {
        for j in 0..d {
            for (t, v) in values.iter().enumerate() {
                buf[t] = v.at(i, j);
            }
            fft_in_place(&mut buf, Direction::Forward);
            let scale = 1.0 / k as f64;
            for (n, coeff) in out.iter_mut().enumerate() {
                coeff.set(i, j, buf[n] * scale);
            }
        }
    }
    Ok(out)
}

/// Evaluate sum_n c_n e^{i n theta_k} on the grid; the inverse of
/// `grid_to_coeffs` on analytic polynomials of degree <= max_coeff < K.
pub fn coeffs_to_grid(coeffs: &[CMat], grid: &FrequencyGrid) -> Vec<CMat> {
    let k = grid.size();
    let d = coeffs[0].dim();
    let mut out = vec![CMat::zeros(d); k];
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    for i in 0..d {
        for j in 0..d {
            for z in buf.iter_mut() {
                *z = Complex64::new(0.0, 0.0);
            }
            for (n, c) in coeffs.iter().enumerate() {
                buf[n % k] += c.at(i, j);
            }
            fft_in_place(&mut buf, Direction::Inverse);
            for (t, v) in out.iter_mut().enumerate() {
                v.set(i, j, buf[t]);
            }
        }
    }
    out
}

/// Scalar variant of [`grid_to_coeffs`].
pub fn grid_to_coeffs_scalar(values: &[Complex64], max_coeff: usize) -> Result<Vec<Complex64>> {
    let k = values.len();
    if max_coeff >= k {
        return Err(Error::GridTooCoarse {
            grid_size: k,
            max_coeff,
        });
    }
    let mut buf = values.to_vec();
    fft_in_place(&mut buf, Direction::Forward);
    let scale = 1.0 / k as f64;
    Ok(buf[..=max_coeff].iter().map(|z| z * scale).collect())
}

/// Scalar variant of [`coeffs_to_grid`].
pub fn coeffs_to_grid_scalar(coeffs: &[Complex64], grid: &FrequencyGrid) -> Vec<Complex64> {
    let k = grid.size();
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    for (n, c) in coeffs.iter().enumerate() {
        buf[n % k] += c;
    }
    fft_in_place(&mut buf, Direction::Inverse);
    buf
}
