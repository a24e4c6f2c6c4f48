//! Spectral density matrices on the frequency grid and the Paley-Wiener
//! log-integrability check.

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::mat::CMat;

/// Relative Frobenius tolerance for Hermitian symmetry of grid samples.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Relative tolerance for positive semidefiniteness of grid samples.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below EIGEN_FLOOR_REL times the grid-wide maximum eigenvalue
/// are clamped before logarithms and inversions.
pub const EIGEN_FLOOR_REL: f64 = 1e-12;
/// Fraction of the flooring log-range used as the default Paley-Wiener
/// margin: a spectrum whose mean log-determinant sits within this fraction
/// of the flooring bottom is declared not factorizable.
const PALEY_WIENER_MARGIN: f64 = 0.1;

/// Hermitian positive semidefinite d x d samples S(theta_k) on a uniform
/// frequency grid, with the 1/(2 pi) normalization: the grid mean of S is
/// the lag-0 autocovariance.
#[derive(Debug, Clone)]
pub struct SpectralDensityMatrix {
    dim: usize,
    grid: FrequencyGrid,
    values: Vec<CMat>,
}

impl SpectralDensityMatrix {
    pub fn new(grid: FrequencyGrid, values: Vec<CMat>) -> Result<Self> {
        if values.len() != grid.size() {
            return Err(Error::DimensionMismatch {
                expected: grid.size(),
                got: values.len(),
            });
        }
        let dim = values[0].dim();
        if values.iter().any(|v| v.dim() != dim) {
            return Err(Error::InvalidInput("grid samples have mixed dimensions".into()));
        }
        for (k, v) in values.iter().enumerate() {
            if v.hermitian_deviation() > HERMITIAN_TOL {
                return Err(Error::InvalidInput(format!(
                    "sample at grid point {k} is not Hermitian (relative deviation {:.3e})",
                    v.hermitian_deviation()
                )));
            }
            let eigs = v.eigvals_hermitian();
            let max = eigs.last().copied().unwrap_or(0.0);
            if eigs[0] < -PSD_TOL * max.max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidInput(format!(
                    "sample at grid point {k} is not positive semidefinite (min eigenvalue {:.3e})",
                    eigs[0]
                )));
            }
        }
        Ok(SpectralDensityMatrix { dim, grid, values })
    }

    /// Construct without the Hermitian/PSD validation; for internal
    /// resampling paths whose output is floored before use.
    pub(crate) fn from_values_unchecked(grid: FrequencyGrid, values: Vec<CMat>) -> Self {
        let dim = values[0].dim();
        SpectralDensityMatrix { dim, grid, values }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[CMat] {
        &self.values
    }

    pub fn at(&self, k: usize) -> &CMat {
        &self.values[k]
    }

    /// Largest eigenvalue over the whole grid.
    pub fn max_eigenvalue(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.eigvals_hermitian().last().copied().unwrap_or(0.0))
            .fold(0.0, f64::max)
    }

    /// The marginal spectrum of a channel subset: the principal submatrix at
    /// every grid point. Indices must be distinct and in range.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Result<SpectralDensityMatrix> {
        if idx.is_empty() {
            return Err(Error::InvalidGroup("empty channel subset".into()));
        }
        let mut seen = vec![false; self.dim];
        for &i in idx {
            if i >= self.dim {
                return Err(Error::InvalidGroup(format!(
                    "channel index {i} out of range for dimension {}",
                    self.dim
                )));
            }
            if seen[i] {
                return Err(Error::InvalidGroup(format!("duplicate channel index {i}")));
            }
            seen[i] = true;
        }
        let values = self
            .values
            .iter()
            .map(|v| v.principal_submatrix(idx))
            .collect();
        // principal submatrices of Hermitian PSD matrices stay Hermitian PSD
        Ok(SpectralDensityMatrix {
            dim: idx.len(),
            grid: self.grid,
            values,
        })
    }

    /// Grid mean of the samples (the lag-0 autocovariance under the 1/(2 pi)
    /// normalization).
    pub fn grid_mean(&self) -> CMat {
        let mut acc = CMat::zeros(self.dim);
        for v in &self.values {
            acc = acc.add(v);
        }
        acc.scale_re(1.0 / self.values.len() as f64)
    }
}

/// Outcome of the Paley-Wiener check.
#[derive(Debug, Clone, Copy)]
pub struct PaleyWienerCheck {
    pub satisfied: bool,
    /// Grid mean of log det S(theta_k) after eigenvalue flooring.
    pub log_det_mean: f64,
}

/// Grid-discrete Paley-Wiener condition: the mean of log det S over the
/// grid, with eigenvalues floored at EIGEN_FLOOR_REL times the grid-wide
/// maximum, must exceed `log_floor`. When `log_floor` is `None` a
/// scale-invariant default is used that fails only spectra essentially
/// pinned to the flooring level.
pub fn check_paley_wiener(
    s: &SpectralDensityMatrix,
    log_floor: Option<f64>,
) -> PaleyWienerCheck {
    let d = s.dim() as f64;
    let max_eig = s.max_eigenvalue();
    if max_eig <= 0.0 || max_eig.is_nan() {
        return PaleyWienerCheck {
            satisfied: false,
            log_det_mean: f64::NEG_INFINITY,
        };
    }
    let floor_eig = EIGEN_FLOOR_REL * max_eig;
    let mut sum = 0.0;
    for v in s.values() {
        for lam in v.eigvals_hermitian() {
            sum += lam.max(floor_eig).ln();
        }
    }
    let log_det_mean = sum / s.values().len() as f64;
    let default_floor =
        d * (floor_eig.ln() + PALEY_WIENER_MARGIN * (max_eig.ln() - floor_eig.ln()));
    let floor = log_floor.unwrap_or(default_floor);
    PaleyWienerCheck {
        satisfied: log_det_mean > floor,
        log_det_mean,
    }
}

/// Clamp each sample's eigenvalues at EIGEN_FLOOR_REL times the grid-wide
/// maximum eigenvalue; used to keep near-singular spectra invertible inside
/// iterative factorization.
pub fn eigen_floored_values(s: &SpectralDensityMatrix) -> Vec<CMat> {
    let max_eig = s.max_eigenvalue();
    let floor = EIGEN_FLOOR_REL * max_eig.max(f64::MIN_POSITIVE);
    s.values()
        .iter()
        .map(|v| {
            let eigs = v.eigvals_hermitian();
            if eigs[0] >= floor {
                v.hermitian_part()
            } else {
                v.eigen_floored(floor)
            }
        })
        .collect()
}
