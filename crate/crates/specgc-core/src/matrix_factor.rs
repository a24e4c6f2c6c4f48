//! Matrix spectral factorization: S = S_+ S_+^* with S_+ analytic and
//! det S_+ outer.
//!
//! The engine is the classical Wilson Newton iteration on the frequency
//! grid: starting from the constant Cholesky factor of the grid-averaged
//! spectrum, each step multiplies the current factor by the causal part of
//! psi^{-1} S psi^{-*} + I (one-sided Fourier series with the constant term
//! halved). Convergence is quadratic near the fixed point for strictly
//! positive definite spectra, and the fixed point is the outer factor up to
//! a constant right unitary, which a triangular normalization of the zeroth
//! coefficient then pins down.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft::{fft_in_place, Direction};
use crate::grid::{coeffs_to_grid, grid_to_coeffs};
use crate::mat::CMat;
use crate::psd::{check_paley_wiener, eigen_floored_values, SpectralDensityMatrix};
use crate::scalar_factor::scalar_factorize;

/// Ratio of the last to the first coefficient's Frobenius norm above which
/// the stored factor is flagged as truncated.
pub const TRUNCATION_FLAG_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FactorizationConfig {
    /// Stopping tolerance on the iterate change and on the grid-level
    /// factorization residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Number of stored coefficients is max_coeff + 1.
    pub max_coeff: usize,
}

impl Default for FactorizationConfig {
    fn default() -> Self {
        FactorizationConfig {
            tol: 1e-9,
            max_iter: 200,
            max_coeff: 64,
        }
    }
}

/// One-sided matrix Fourier coefficients c_n{S_+}, n = 0..=max_coeff, with
/// the reconstruction residual recorded alongside.
#[derive(Debug, Clone)]
pub struct SpectralFactor {
    dim: usize,
    coeffs: Vec<CMat>,
    residual: f64,
}

impl SpectralFactor {
    pub fn new(coeffs: Vec<CMat>, residual: f64) -> Self {
        assert!(!coeffs.is_empty());
        let dim = coeffs[0].dim();
        SpectralFactor {
            dim,
            coeffs,
            residual,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &CMat {
        &self.coeffs[n]
    }

    pub fn max_coeff(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Reconstruction residual recorded when the factor was produced.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Norm ratio of the last stored coefficient to the first; large values
    /// mean the stored truncation is lossy.
    pub fn truncation_ratio(&self) -> f64 {
        let c0 = self.coeffs[0].frob_norm();
        if c0 == 0.0 {
            return f64::INFINITY;
        }
        self.coeffs[self.coeffs.len() - 1].frob_norm() / c0
    }

    pub fn truncation_flagged(&self) -> bool {
        self.truncation_ratio() > TRUNCATION_FLAG_RATIO
    }

    /// Innovation covariance c_0 c_0^*.
    pub fn innovation_covariance(&self) -> CMat {
        self.coeffs[0].mul(&self.coeffs[0].adjoint())
    }
}

/// Factorize a spectral density matrix satisfying the Paley-Wiener check.
///
/// The univariate case delegates to [`scalar_factorize`]; higher dimensions
/// run the Wilson iteration.
pub fn matrix_factorize(
    s: &SpectralDensityMatrix,
    cfg: &FactorizationConfig,
) -> Result<SpectralFactor> {
    let k = s.grid().size();
    if cfg.max_coeff >= k / 2 {
        return Err(Error::GridTooCoarse {
            grid_size: k,
            max_coeff: cfg.max_coeff,
        });
    }
    let pw = check_paley_wiener(s, None);
    if !pw.satisfied {
        return Err(Error::NotFactorizable {
            log_det_mean: pw.log_det_mean,
        });
    }
    if s.dim() == 1 {
        let density: Vec<f64> = s.values().iter().map(|v| v.at(0, 0).re.max(0.0)).collect();
        let scalar = scalar_factorize(&density, cfg.max_coeff)?;
        let coeffs: Vec<CMat> = scalar
            .coeffs
            .iter()
            .map(|&c| CMat::from_rows(&[vec![c]]))
            .collect();
        let factor = SpectralFactor::new(coeffs, 0.0);
        let residual = factor_residual(s, &factor)?;
        return Ok(SpectralFactor { residual, ..factor });
    }
    wilson_factorize(s, cfg)
}

/// Smallest internal grid the iteration runs on; headroom over the user
/// grid keeps causal-part truncation effects below the stopping tolerance.
const MIN_WORK_GRID: usize = 1024;
const MAX_WORK_GRID: usize = 8192;

/// The Wilson iteration proper, valid for any dimension >= 1. Exposed so the
/// univariate path can be cross-checked against the scalar factorization.
///
/// Internally the spectrum is band-limited-interpolated onto an oversampled
/// grid: products of causal iterates spill past the stored degree, and with
/// too little headroom that spill aliases into anticausal coefficients and
/// stalls convergence well above the tolerance.
pub fn wilson_factorize(
    s: &SpectralDensityMatrix,
    cfg: &FactorizationConfig,
) -> Result<SpectralFactor> {
    let k = s.grid().size();
    let d = s.dim();
    if cfg.max_coeff >= k / 2 {
        return Err(Error::GridTooCoarse {
            grid_size: k,
            max_coeff: cfg.max_coeff,
        });
    }

    let kw = (2 * k).clamp(MIN_WORK_GRID, MAX_WORK_GRID).max(k);
    let upsampled;
    let work_values = if kw == k {
        eigen_floored_values(s)
    } else {
        upsampled = upsample(s, kw)?;
        eigen_floored_values(&upsampled)
    };

    let mut mean = CMat::zeros(d);
    for v in &work_values {
        mean = mean.add(v);
    }
    mean = mean.scale_re(1.0 / kw as f64);
    let init = mean.cholesky()?;
    let mut psi: Vec<CMat> = vec![init; kw];

    let scale = work_values
        .iter()
        .map(|v| v.frob_norm())
        .fold(f64::MIN_POSITIVE, f64::max);

    let mut grid_residual = f64::INFINITY;
    for iter in 1..=cfg.max_iter {
        // G = psi^{-1} S psi^{-*} + I per frequency
        let mut g: Vec<CMat> = Vec::with_capacity(kw);
        for (p, sv) in psi.iter().zip(&work_values) {
            let b = p.solve_mat(sv)?;
            let x = p.solve_mat(&b.adjoint())?;
            g.push(x.adjoint().add(&CMat::identity(d)));
        }
        let w = causal_part(&g);

        let mut change_num = 0.0;
        let mut change_den = 0.0;
        for (p, wk) in psi.iter_mut().zip(&w) {
            let next = p.mul(wk);
            change_num += next.sub(p).frob_norm().powi(2);
            change_den += p.frob_norm().powi(2);
            *p = next;
        }
        let delta = (change_num / change_den).sqrt();

        // convergence of the iteration itself, measured where the iteration
        // acts; the truncated-coefficient reconstruction error is recorded
        // on the returned factor, not enforced (estimated spectra need far
        // more coefficients than anyone asks for)
        grid_residual = psi
            .iter()
            .zip(&work_values)
            .map(|(p, sv)| p.mul(&p.adjoint()).sub(sv).frob_norm())
            .fold(0.0, f64::max)
            / scale;

        if delta <= cfg.tol && grid_residual <= cfg.tol {
            let coeffs = grid_to_coeffs(&psi, cfg.max_coeff)?;
            let normalized = normalize_lower_triangular(coeffs);
            let factor = SpectralFactor::new(normalized, 0.0);
            let recorded = factor_residual(s, &factor)?;
            return Ok(SpectralFactor { residual: recorded, ..factor });
        }
        if delta <= 1e-3 * cfg.tol {
            // the iterate froze short of the target; more steps cannot help
            return Err(Error::NonConvergence {
                iterations: iter,
                residual: grid_residual,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        residual: grid_residual,
    })
}

/// Trigonometric interpolation of the grid samples onto a finer grid:
/// zero-pad the two-sided coefficient sequence, splitting the Nyquist term
/// symmetrically so Hermitian-valued data stays Hermitian.
fn upsample(s: &SpectralDensityMatrix, kw: usize) -> Result<SpectralDensityMatrix> {
    let k = s.grid().size();
    let d = s.dim();
    let mut out = vec![CMat::zeros(d); kw];
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    let mut big = vec![Complex64::new(0.0, 0.0); kw];
    for i in 0..d {
        for j in 0..d {
            for (t, v) in s.values().iter().enumerate() {
                buf[t] = v.at(i, j);
            }
            fft_in_place(&mut buf, Direction::Forward);
            for z in big.iter_mut() {
                *z = Complex64::new(0.0, 0.0);
            }
            let scale = 1.0 / k as f64;
            for n in 0..k / 2 {
                big[n] = buf[n] * scale;
            }
            let nyq = buf[k / 2] * (0.5 * scale);
            big[k / 2] = nyq;
            big[kw - k / 2] = nyq;
            for n in k / 2 + 1..k {
                big[kw - (k - n)] = buf[n] * scale;
            }
            fft_in_place(&mut big, Direction::Inverse);
            for (t, o) in out.iter_mut().enumerate() {
                o.set(i, j, big[t]);
            }
        }
    }
    let grid = crate::grid::FrequencyGrid::new(kw)?;
    let values = out.into_iter().map(|v| v.hermitian_part()).collect();
    // interpolation can dip below zero between samples; flooring happens on
    // the caller side, so bypass the PSD validation here
    Ok(SpectralDensityMatrix::from_values_unchecked(grid, values))
}

/// One-sided part of a Hermitian-valued grid function: coefficient 0 and
/// the self-conjugate Nyquist coefficient halved, coefficients 1..K/2 kept,
/// the rest dropped. With g = w + w^* exactly on the grid, this is the
/// analytic w solving the Newton linearization.
fn causal_part(g: &[CMat]) -> Vec<CMat> {
    let k = g.len();
    let d = g[0].dim();
    let mut out = vec![CMat::zeros(d); k];
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    for i in 0..d {
        for j in 0..d {
            for (t, gm) in g.iter().enumerate() {
                buf[t] = gm.at(i, j);
            }
            fft_in_place(&mut buf, Direction::Forward);
            // halve the constant term; the Nyquist mode is self-conjugate
            // on the grid so it is halved too, making w + w^* = g exact
            buf[0] *= 0.5;
            buf[k / 2] *= 0.5;
            for z in buf.iter_mut().skip(k / 2 + 1) {
                *z = Complex64::new(0.0, 0.0);
            }
            fft_in_place(&mut buf, Direction::Inverse);
            let scale = 1.0 / k as f64;
            for (t, o) in out.iter_mut().enumerate() {
                o.set(i, j, buf[t] * scale);
            }
        }
    }
    out
}

/// Right-multiply all coefficients by the constant unitary that makes c_0
/// lower triangular with positive diagonal. The factorization determines
/// S_+ only up to such a factor; this picks the canonical representative.
fn normalize_lower_triangular(coeffs: Vec<CMat>) -> Vec<CMat> {
    let d = coeffs[0].dim();
    let (q, r) = coeffs[0].adjoint().qr();
    let mut phases = CMat::zeros(d);
    for j in 0..d {
        let rjj = r.at(j, j);
        let p = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        phases.set(j, j, p);
    }
    let u = q.mul(&phases);
    coeffs.into_iter().map(|c| c.mul(&u)).collect()
}

/// Max-over-grid relative reconstruction error of F F^* against S.
pub fn factor_residual(s: &SpectralDensityMatrix, factor: &SpectralFactor) -> Result<f64> {
    if factor.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: factor.dim(),
        });
    }
    let rebuilt = coeffs_to_grid(factor.coeffs(), s.grid());
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (f, sv) in rebuilt.iter().zip(s.values()) {
        let err = f.mul(&f.adjoint()).sub(sv).frob_norm();
        worst = worst.max(err);
        scale = scale.max(sv.frob_norm());
    }
    Ok(worst / scale.max(f64::MIN_POSITIVE))
}
