//! Matrix autocovariance sequences.

use crate::error::{Error, Result};
use crate::mat::CMat;

/// Sequence of d x d autocovariance matrices c_m for m = 0..=max_lag.
/// Negative lags are implied by c_{-m} = c_m^*.
#[derive(Debug, Clone)]
pub struct AutocovarianceSequence {
    dim: usize,
    values: Vec<CMat>,
}

impl AutocovarianceSequence {
    pub fn new(values: Vec<CMat>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("autocovariance sequence is empty".into()));
        }
        let dim = values[0].dim();
        if values.iter().any(|c| c.dim() != dim) {
            return Err(Error::InvalidInput("autocovariance matrices have mixed dimensions".into()));
        }
        let c0 = &values[0];
        if c0.hermitian_deviation() > 1e-10 {
            return Err(Error::InvalidInput("lag-0 autocovariance is not Hermitian".into()));
        }
        let eigs = c0.eigvals_hermitian();
        let max = eigs.last().copied().unwrap_or(0.0);
        if eigs[0] < -1e-10 * max.max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidInput(format!(
                "lag-0 autocovariance is not positive semidefinite (min eigenvalue {:.3e})",
                eigs[0]
            )));
        }
        Ok(AutocovarianceSequence { dim, values })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    /// c_m for any |m| <= max_lag, using c_{-m} = c_m^*.
    pub fn get(&self, m: i64) -> CMat {
        let idx = m.unsigned_abs() as usize;
        assert!(idx <= self.max_lag(), "lag {m} out of range");
        if m >= 0 {
            self.values[idx].clone()
        } else {
            self.values[idx].adjoint()
        }
    }

    pub fn lag0(&self) -> &CMat {
        &self.values[0]
    }

    pub fn values(&self) -> &[CMat] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn negative_lags_are_adjoints() {
        let c0 = CMat::from_real_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]);
        let c1 = CMat::from_rows(&[
            vec![Complex64::new(0.3, 0.0), Complex64::new(0.1, 0.2)],
            vec![Complex64::new(0.0, -0.1), Complex64::new(0.2, 0.0)],
        ]);
        let seq = AutocovarianceSequence::new(vec![c0, c1.clone()]).unwrap();
        assert!(seq.get(-1).sub(&c1.adjoint()).frob_norm() == 0.0);
    }

    #[test]
    fn rejects_indefinite_lag0() {
        let c0 = CMat::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(AutocovarianceSequence::new(vec![c0]).is_err());
    }

    #[test]
    fn lag_norm_bound_holds_for_valid_sequences() {
        // |c_m| <= d * |c_0| in Frobenius norm, a Cauchy-Schwarz consequence.
        // Spot-check on an AR(1)-style sequence.
        let d = 2;
        let c0 = CMat::from_real_rows(&[vec![1.0, 0.3], vec![0.3, 1.0]]);
        let mut values = vec![c0.clone()];
        for m in 1..6 {
            values.push(c0.scale_re(0.5f64.powi(m)));
        }
        let seq = AutocovarianceSequence::new(values).unwrap();
        let bound = d as f64 * seq.lag0().frob_norm();
        for m in 0..=seq.max_lag() {
            assert!(seq.get(m as i64).frob_norm() <= bound + 1e-12);
        }
    }
}
