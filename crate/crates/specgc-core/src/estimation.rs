//! Spectral density and autocovariance estimation from observations.
//!
//! Three estimators are offered: Welch averaging with a Hann window,
//! Blackman-Tukey with a Bartlett lag window, and the multitaper method
//! (the default, with NW = 4 and 7 Slepian tapers). All of them produce
//! Hermitian positive semidefinite grid samples by construction, with
//! cross-spectra oriented so that the grid transform of the density
//! reproduces the autocovariance orientation c_m = [X_{n+m}, X_n^T].

use num_complex::Complex64;
use serde::Serialize;

use crate::acov::AutocovarianceSequence;
use crate::dpss::dpss_tapers;
use crate::error::{Error, Result};
use crate::fft::{fft_in_place, Direction};
use crate::grid::FrequencyGrid;
use crate::mat::CMat;
use crate::psd::SpectralDensityMatrix;
use crate::series::{Detrend, MultichannelSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimationMethod {
    Welch,
    BlackmanTukey,
    Multitaper,
}

/// Estimator settings; zero-valued sizes mean "resolve automatically
/// against the series length".
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EstimatorConfig {
    pub method: EstimationMethod,
    /// Segment length; 0 picks min(T, 1024) for Welch and min(T, 2048) for
    /// multitaper.
    pub segment_length: usize,
    /// Fraction of a segment shared with its successor, in [0, 1).
    pub overlap_fraction: f64,
    /// Blackman-Tukey lag cutoff; 0 picks min(T - 1, K/2 - 1, 256).
    pub max_lag: usize,
    /// Time-bandwidth product NW for the multitaper method.
    pub taper_bandwidth_product: f64,
    /// Number of Slepian tapers; must not exceed floor(2 NW).
    pub taper_count: usize,
    pub detrend: Detrend,
    /// Diagonal loading factor lambda: after estimation, add
    /// lambda * (grid mean of trace(S) / d) * I. Off (0) by default and
    /// never applied silently.
    pub regularization: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            method: EstimationMethod::Multitaper,
            segment_length: 0,
            overlap_fraction: 0.5,
            max_lag: 0,
            taper_bandwidth_product: 4.0,
            taper_count: 7,
            detrend: Detrend::Mean,
            regularization: 0.0,
        }
    }
}

impl EstimatorConfig {
    fn resolved_segment(&self, t: usize) -> Result<usize> {
        let auto = match self.method {
            EstimationMethod::Welch => t.min(1024),
            EstimationMethod::Multitaper => t.min(2048),
            EstimationMethod::BlackmanTukey => t,
        };
        let p = if self.segment_length == 0 {
            auto
        } else {
            self.segment_length
        };
        if p > t {
            return Err(Error::InsufficientData { needed: p, got: t });
        }
        if p < 8 {
            return Err(Error::InvalidConfig(format!(
                "segment length {p} is too short"
            )));
        }
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.overlap_fraction) {
            return Err(Error::InvalidConfig(format!(
                "overlap fraction {} must lie in [0, 1)",
                self.overlap_fraction
            )));
        }
        if self.method == EstimationMethod::Multitaper {
            let cap = (2.0 * self.taper_bandwidth_product).floor();
            if self.taper_count == 0 || self.taper_count as f64 > cap {
                return Err(Error::InvalidConfig(format!(
                    "taper count {} must be between 1 and floor(2 NW) = {cap}",
                    self.taper_count
                )));
            }
        }
        if self.regularization < 0.0 {
            return Err(Error::InvalidConfig("regularization must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Biased sample autocovariance c_m = (1/T) sum_n x_{n+m} x_n^T for
/// m = 0..=max_lag. The 1/T normalization keeps the block-Toeplitz Gram
/// matrices positive semidefinite, which the factorization downstream
/// depends on.
pub fn estimate_autocovariance(
    series: &MultichannelSeries,
    max_lag: usize,
) -> Result<AutocovarianceSequence> {
    let t = series.len();
    if max_lag >= t {
        return Err(Error::InsufficientData {
            needed: max_lag + 1,
            got: t,
        });
    }
    let d = series.dim();
    let mut values = Vec::with_capacity(max_lag + 1);
    for m in 0..=max_lag {
        let mut c = CMat::zeros(d);
        for k in 0..d {
            let xk = series.channel(k);
            for l in 0..d {
                let xl = series.channel(l);
                let mut acc = 0.0;
                for n in 0..t - m {
                    acc += xk[n + m] * xl[n];
                }
                c.set(k, l, Complex64::new(acc / t as f64, 0.0));
            }
        }
        values.push(c);
    }
    AutocovarianceSequence::new(values)
}

/// Estimate the spectral density matrix on the grid.
pub fn estimate_psd(
    series: &MultichannelSeries,
    cfg: &EstimatorConfig,
    grid: &FrequencyGrid,
) -> Result<SpectralDensityMatrix> {
    cfg.validate()?;
    let detrended = series.detrended(cfg.detrend);
    let mut values = match cfg.method {
        EstimationMethod::Welch => welch(&detrended, cfg, grid)?,
        EstimationMethod::Multitaper => multitaper(&detrended, cfg, grid)?,
        EstimationMethod::BlackmanTukey => blackman_tukey(&detrended, cfg, grid)?,
    };
    if cfg.regularization > 0.0 {
        let d = series.dim();
        let mut mean_trace = 0.0;
        for v in &values {
            mean_trace += v.trace().re;
        }
        mean_trace /= values.len() as f64;
        let load = cfg.regularization * mean_trace / d as f64;
        for v in values.iter_mut() {
            for i in 0..d {
                v.add_at(i, i, Complex64::new(load, 0.0));
            }
        }
    }
    let values = values.into_iter().map(|v| v.hermitian_part()).collect();
    SpectralDensityMatrix::new(*grid, values)
}

/// Windowed transform J(theta_k) = sum_t w_t x_t e^{+i theta_k t} on the
/// grid, via folding modulo K so segments longer than the grid stay exact.
fn tapered_transform(x: &[f64], window: &[f64], k: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    for (t, (&xt, &wt)) in x.iter().zip(window).enumerate() {
        buf[t % k] += Complex64::new(xt * wt, 0.0);
    }
    fft_in_place(&mut buf, Direction::Inverse);
    buf
}

fn accumulate_outer(acc: &mut [CMat], transforms: &[Vec<Complex64>], weight: f64) {
    let d = transforms.len();
    for (k, a) in acc.iter_mut().enumerate() {
        for i in 0..d {
            for j in 0..d {
                let v = transforms[i][k] * transforms[j][k].conj() * weight;
                a.add_at(i, j, v);
            }
        }
    }
}

fn segment_starts(t: usize, p: usize, overlap: f64) -> Vec<usize> {
    let hop = ((p as f64) * (1.0 - overlap)).round().max(1.0) as usize;
    let mut starts = Vec::new();
    let mut s = 0;
    while s + p <= t {
        starts.push(s);
        s += hop;
    }
    if starts.is_empty() {
        starts.push(0);
    }
    starts
}

fn welch(
    series: &MultichannelSeries,
    cfg: &EstimatorConfig,
    grid: &FrequencyGrid,
) -> Result<Vec<CMat>> {
    let t = series.len();
    let p = cfg.resolved_segment(t)?;
    let k = grid.size();
    let d = series.dim();
    // periodic Hann window
    let window: Vec<f64> = (0..p)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / p as f64).cos())
        .collect();
    let power: f64 = window.iter().map(|w| w * w).sum();
    let starts = segment_starts(t, p, cfg.overlap_fraction);
    let weight = 1.0 / (power * starts.len() as f64);
    let mut acc = vec![CMat::zeros(d); k];
    for &s in &starts {
        let transforms: Vec<Vec<Complex64>> = (0..d)
            .map(|ch| tapered_transform(&series.channel(ch)[s..s + p], &window, k))
            .collect();
        accumulate_outer(&mut acc, &transforms, weight);
    }
    Ok(acc)
}

fn multitaper(
    series: &MultichannelSeries,
    cfg: &EstimatorConfig,
    grid: &FrequencyGrid,
) -> Result<Vec<CMat>> {
    let t = series.len();
    let p = cfg.resolved_segment(t)?;
    let k = grid.size();
    let d = series.dim();
    let tapers = dpss_tapers(p, cfg.taper_bandwidth_product, cfg.taper_count)?;
    let starts = segment_starts(t, p, cfg.overlap_fraction);
    // tapers are unit-norm eigenvectors, so each eigenspectrum is already
    // correctly normalized
    let weight = 1.0 / (starts.len() * tapers.len()) as f64;
    let mut acc = vec![CMat::zeros(d); k];
    for &s in &starts {
        for taper in &tapers {
            let transforms: Vec<Vec<Complex64>> = (0..d)
                .map(|ch| tapered_transform(&series.channel(ch)[s..s + p], taper, k))
                .collect();
            accumulate_outer(&mut acc, &transforms, weight);
        }
    }
    Ok(acc)
}

fn blackman_tukey(
    series: &MultichannelSeries,
    cfg: &EstimatorConfig,
    grid: &FrequencyGrid,
) -> Result<Vec<CMat>> {
    let t = series.len();
    let k = grid.size();
    let d = series.dim();
    let m = if cfg.max_lag == 0 {
        (t - 1).min(k / 2 - 1).min(256)
    } else {
        cfg.max_lag
    };
    if m >= t {
        return Err(Error::InsufficientData { needed: m + 1, got: t });
    }
    if m >= k / 2 {
        return Err(Error::InvalidConfig(format!(
            "lag cutoff {m} needs a grid larger than {k}"
        )));
    }
    let acov = estimate_autocovariance(series, m)?;
    // Bartlett lag window keeps the estimate positive semidefinite
    // (Fejer smoothing of the periodogram).
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    let mut out = vec![CMat::zeros(d); k];
    for i in 0..d {
        for j in 0..d {
            for z in buf.iter_mut() {
                *z = Complex64::new(0.0, 0.0);
            }
            for lag in 0..=m {
                let wt = 1.0 - lag as f64 / (m as f64 + 1.0);
                let c = acov.get(lag as i64);
                buf[lag] += c.at(i, j) * wt;
                if lag > 0 {
                    let cm = acov.get(-(lag as i64));
                    buf[k - lag] += cm.at(i, j) * wt;
                }
            }
            fft_in_place(&mut buf, Direction::Inverse);
            for (n, o) in out.iter_mut().enumerate() {
                o.set(i, j, buf[n]);
            }
        }
    }
    Ok(out)
}
