//! Wiener-Granger causality indices assembled from prediction errors.
//!
//! For a source group Y and target group X, the restricted error e_X comes
//! from factorizing the target-marginal spectrum (the principal submatrix
//! of the joint density), and the full error e_XY from factorizing the
//! joint spectrum of X and Y and restricting to target rows. Y is said to
//! drive X when e_XY is significantly below e_X; the reported statistic is
//! the log variance ratio ln(e_X^2 / e_XY^2), which is zero exactly when
//! the source group adds nothing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::EstimatorConfig;
use crate::matrix_factor::{matrix_factorize, FactorizationConfig, SpectralFactor};
use crate::prediction::{grouped_prediction_error, joint_prediction_error};
use crate::psd::SpectralDensityMatrix;

/// A source group / target group pair (disjoint channel index sets).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    source: Vec<usize>,
    target: Vec<usize>,
}

impl GroupSpec {
    pub fn new(source: Vec<usize>, target: Vec<usize>) -> Result<Self> {
        if source.is_empty() || target.is_empty() {
            return Err(Error::InvalidGroup("source and target must be nonempty".into()));
        }
        let mut all: Vec<usize> = source.iter().chain(target.iter()).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != source.len() + target.len() {
            return Err(Error::InvalidGroup(
                "source and target must be disjoint with no duplicates".into(),
            ));
        }
        Ok(GroupSpec { source, target })
    }

    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    fn check_range(&self, dim: usize) -> Result<()> {
        for &c in self.source.iter().chain(self.target.iter()) {
            if c >= dim {
                return Err(Error::InvalidGroup(format!(
                    "channel index {c} out of range for dimension {dim}"
                )));
            }
        }
        Ok(())
    }
}

/// Restricted and full prediction errors at one lag, with the derived
/// comparison statistics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CausalityIndex {
    pub lag: usize,
    /// e_X: target predicted from its own past only.
    pub e_restricted: f64,
    /// e_XY: target predicted from the joint past of target and source.
    pub e_full: f64,
    /// e_full / e_restricted.
    pub ratio: f64,
    /// ln(e_restricted^2 / e_full^2); nonnegative up to numerics.
    pub log_index: f64,
}

/// Result of evaluating one grouping: the per-lag indices plus the two
/// factorizations they came from.
#[derive(Debug)]
pub struct GroupAnalysis {
    pub indices: Vec<CausalityIndex>,
    pub joint_factor: SpectralFactor,
    pub marginal_factor: SpectralFactor,
}

/// Evaluate one grouping across a sorted ascending list of lags, reusing
/// the two factorizations for every lag.
pub fn analyze_grouping(
    s_joint: &SpectralDensityMatrix,
    spec: &GroupSpec,
    lags: &[usize],
    cfg: &FactorizationConfig,
) -> Result<GroupAnalysis> {
    if lags.is_empty() {
        return Err(Error::InvalidConfig("no lags requested".into()));
    }
    if lags.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("lags must be sorted ascending and distinct".into()));
    }
    if lags[0] == 0 {
        return Err(Error::InvalidConfig("lags must be at least 1".into()));
    }
    spec.check_range(s_joint.dim())?;

    // canonical ordering: ascending channel index within the joint block
    let mut union: Vec<usize> = spec.source.iter().chain(spec.target.iter()).copied().collect();
    union.sort_unstable();
    let mut targets_sorted = spec.target.clone();
    targets_sorted.sort_unstable();
    let target_positions: Vec<usize> = targets_sorted
        .iter()
        .map(|t| union.iter().position(|u| u == t).unwrap())
        .collect();

    let max_lag = *lags.last().unwrap();
    let eff_cfg = FactorizationConfig {
        max_coeff: cfg.max_coeff.max(max_lag).max(64),
        ..*cfg
    };

    let s_sub = s_joint.principal_submatrix(&union)?;
    let joint_factor = matrix_factorize(&s_sub, &eff_cfg)
        .map_err(|e| e.with_context("joint spectrum factorization"))?;
    let s_marg = s_joint.principal_submatrix(&targets_sorted)?;
    let marginal_factor = matrix_factorize(&s_marg, &eff_cfg)
        .map_err(|e| e.with_context("target-marginal spectrum factorization"))?;

    let indices = lags
        .iter()
        .map(|&lag| {
            let e_full = grouped_prediction_error(&joint_factor, &target_positions, lag)?.value;
            let e_restricted = joint_prediction_error(&marginal_factor, lag)?.value;
            Ok(CausalityIndex {
                lag,
                e_restricted,
                e_full,
                ratio: e_full / e_restricted,
                log_index: 2.0 * (e_restricted.ln() - e_full.ln()),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(GroupAnalysis {
        indices,
        joint_factor,
        marginal_factor,
    })
}

/// One causality index per requested lag.
pub fn lag_profile(
    s_joint: &SpectralDensityMatrix,
    spec: &GroupSpec,
    lags: &[usize],
    cfg: &FactorizationConfig,
) -> Result<Vec<CausalityIndex>> {
    Ok(analyze_grouping(s_joint, spec, lags, cfg)?.indices)
}

/// Single-lag convenience wrapper over [`lag_profile`].
pub fn causality_index(
    s_joint: &SpectralDensityMatrix,
    spec: &GroupSpec,
    lag: usize,
    cfg: &FactorizationConfig,
) -> Result<CausalityIndex> {
    Ok(lag_profile(s_joint, spec, &[lag], cfg)?.remove(0))
}

/// Strictly-greater threshold test on the log index.
pub fn significance_flag(index: &CausalityIndex, threshold: f64) -> bool {
    index.log_index > threshold
}

/// One evaluated (grouping, lag) cell of a report.
#[derive(Debug, Clone, Serialize)]
pub struct IndexEntry {
    pub lag: usize,
    pub e_restricted: f64,
    pub e_full: f64,
    pub ratio: f64,
    pub log_index: f64,
    pub significant: bool,
}

/// Per-grouping section of a report.
#[derive(Debug, Clone, Serialize)]
pub struct GroupingResult {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub joint_factor_residual: f64,
    pub marginal_factor_residual: f64,
    pub joint_truncation_flagged: bool,
    pub marginal_truncation_flagged: bool,
    pub indices: Vec<IndexEntry>,
}

/// Machine-readable analysis report; field order is the wire order.
#[derive(Debug, Clone, Serialize)]
pub struct CausalityReport {
    pub schema_version: u32,
    pub channel_names: Vec<String>,
    pub grid_size: usize,
    pub estimator: EstimatorConfig,
    pub factorization: FactorizationConfig,
    pub significance_threshold: f64,
    pub groupings: Vec<GroupingResult>,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;
