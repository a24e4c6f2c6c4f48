//! Vector autoregression fixtures: analytic spectra and autocovariances.
//!
//! A stable VAR(r) model x_n = sum_k A_k x_{n-k} + eps_n has spectral
//! density S(theta) = H(theta) Sigma H(theta)^* with transfer function
//! H(theta) = (I - sum_k A_k e^{i k theta})^{-1}; with coefficients taken
//! against e^{-i m theta} in the autocovariance transform, H carries the
//! positive exponent so that the analytic factor H(theta) chol(Sigma) has
//! one-sided Fourier coefficients. These closed forms are the ground truth
//! that the estimation and factorization paths are validated against.

use num_complex::Complex64;

use crate::acov::AutocovarianceSequence;
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::mat::CMat;
use crate::psd::SpectralDensityMatrix;

/// Stable vector autoregression with positive definite innovation
/// covariance; a test-fixture generator, not an estimator.
#[derive(Debug, Clone)]
pub struct VarModel {
    dim: usize,
    coeff_matrices: Vec<CMat>,
    noise_cov: CMat,
    noise_chol: CMat,
}

impl VarModel {
    pub fn new(coeff_matrices: Vec<Vec<Vec<f64>>>, noise_cov: Vec<Vec<f64>>) -> Result<Self> {
        let dim = noise_cov.len();
        if dim == 0 {
            return Err(Error::InvalidInput("noise covariance is empty".into()));
        }
        if noise_cov.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput("noise covariance is not square".into()));
        }
        let sigma = CMat::from_real_rows(&noise_cov);
        if sigma.hermitian_deviation() > 1e-12 {
            return Err(Error::InvalidInput("noise covariance is not symmetric".into()));
        }
        let noise_chol = sigma
            .cholesky()
            .map_err(|_| Error::InvalidInput("noise covariance is not positive definite".into()))?;
        let coeffs: Vec<CMat> = coeff_matrices
            .iter()
            .map(|m| {
                if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                    Err(Error::InvalidInput(format!(
                        "coefficient matrices must be {dim}x{dim}"
                    )))
                } else {
                    Ok(CMat::from_real_rows(m))
                }
            })
            .collect::<Result<_>>()?;
        let model = VarModel {
            dim,
            coeff_matrices: coeffs,
            noise_cov: sigma,
            noise_chol,
        };
        let (stable, rho) = model.stability();
        if !stable {
            return Err(Error::UnstableModel {
                spectral_radius: rho,
            });
        }
        Ok(model)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Autoregressive order r.
    pub fn order(&self) -> usize {
        self.coeff_matrices.len()
    }

    pub fn coeff_matrices(&self) -> &[CMat] {
        &self.coeff_matrices
    }

    pub fn noise_cov(&self) -> &CMat {
        &self.noise_cov
    }

    pub fn noise_chol(&self) -> &CMat {
        &self.noise_chol
    }

    /// Companion matrix of the lag polynomial (dimension d*r).
    fn companion(&self) -> CMat {
        let r = self.order();
        let d = self.dim;
        let n = d * r;
        let mut f = CMat::zeros(n);
        for (k, a) in self.coeff_matrices.iter().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    f.set(i, k * d + j, a.at(i, j));
                }
            }
        }
        for i in d..n {
            f.set(i, i - d, Complex64::new(1.0, 0.0));
        }
        f
    }

    /// Stability via Gelfand's formula on the companion matrix: repeated
    /// squaring drives |F^(2^j)|_F^(1/2^j) to the spectral radius from
    /// above, so any estimate below 1 certifies stability.
    pub fn stability(&self) -> (bool, f64) {
        if self.order() == 0 {
            return (true, 0.0);
        }
        let mut f = self.companion();
        let mut exponent = 1.0f64;
        let mut rho_est = f64::INFINITY;
        for _ in 0..24 {
            let norm = f.frob_norm();
            if norm == 0.0 {
                return (true, 0.0);
            }
            rho_est = norm.powf(1.0 / exponent);
            if !(1e-60..=1e60).contains(&norm) {
                break;
            }
            f = f.mul(&f);
            exponent *= 2.0;
        }
        (rho_est < 1.0, rho_est)
    }

    /// Transfer function H(theta) = (I - sum_k A_k e^{i k theta})^{-1}.
    pub fn transfer_function(&self, theta: f64) -> Result<CMat> {
        let d = self.dim;
        let mut m = CMat::identity(d);
        for (k, a) in self.coeff_matrices.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, (k as f64 + 1.0) * theta);
            m = m.sub(&a.scale(ph));
        }
        m.inverse()
    }
}

/// Analytic spectral density of a stable VAR on the grid:
/// S(theta) = H(theta) Sigma H(theta)^*.
pub fn var_psd(model: &VarModel, grid: &FrequencyGrid) -> Result<SpectralDensityMatrix> {
    let values: Vec<CMat> = grid
        .thetas()
        .map(|t| {
            let h = model.transfer_function(t)?;
            Ok(h.mul(model.noise_cov()).mul(&h.adjoint()).hermitian_part())
        })
        .collect::<Result<_>>()?;
    SpectralDensityMatrix::new(*grid, values)
}

/// Analytic autocovariance sequence of a stable VAR: the companion-form
/// discrete Lyapunov equation gives lags 0..r-1, the Yule-Walker recursion
/// c_m = sum_k A_k c_{m-k} extends beyond.
pub fn var_autocovariance(model: &VarModel, max_lag: usize) -> Result<AutocovarianceSequence> {
    let d = model.dim();
    let r = model.order();
    let mut values: Vec<CMat> = Vec::with_capacity(max_lag + 1);

    if r == 0 {
        values.push(model.noise_cov().clone());
        for _ in 1..=max_lag {
            values.push(CMat::zeros(d));
        }
        return AutocovarianceSequence::new(values);
    }

    // Gamma = F Gamma F^* + Q solved by doubling: Gamma = sum_j F^j Q F^*j.
    let n = d * r;
    let mut q = CMat::zeros(n);
    for i in 0..d {
        for j in 0..d {
            q.set(i, j, model.noise_cov().at(i, j));
        }
    }
    let mut f = model.companion();
    let mut gamma = q;
    for _ in 0..64 {
        let fg = f.mul(&gamma).mul(&f.adjoint());
        let update_norm = fg.frob_norm();
        gamma = gamma.add(&fg).hermitian_part();
        if update_norm > 1e60 {
            let (_, rho) = model.stability();
            return Err(Error::UnstableModel {
                spectral_radius: rho,
            });
        }
        f = f.mul(&f);
        if update_norm <= 1e-17 * gamma.frob_norm() {
            break;
        }
    }

    // First block row of Gamma holds c_0 .. c_{r-1}.
    for m in 0..r.min(max_lag + 1) {
        let mut c = CMat::zeros(d);
        for i in 0..d {
            for j in 0..d {
                c.set(i, j, gamma.at(i, m * d + j));
            }
        }
        values.push(c);
    }
    for m in values.len()..=max_lag {
        let mut c = CMat::zeros(d);
        for (k, a) in model.coeff_matrices().iter().enumerate() {
            let lag = m as i64 - (k as i64 + 1);
            let prev = if lag >= 0 {
                values[lag as usize].clone()
            } else {
                values[(-lag) as usize].adjoint()
            };
            c = c.add(&a.mul(&prev));
        }
        values.push(c);
    }
    AutocovarianceSequence::new(values)
}
