//! Multichannel time-series container.

use serde::Serialize;

use crate::error::{Error, Result};

/// Raw real-valued observations, d channels by T samples.
#[derive(Debug, Clone, PartialEq)]
pub struct MultichannelSeries {
    data: Vec<Vec<f64>>,
    channel_names: Vec<String>,
    sample_interval: f64,
}

/// Detrending applied before spectral estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Detrend {
    None,
    Mean,
    Linear,
}

impl MultichannelSeries {
    pub fn new(
        data: Vec<Vec<f64>>,
        channel_names: Vec<String>,
        sample_interval: f64,
    ) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidInput("series needs at least one channel".into()));
        }
        let t = data[0].len();
        if t < 2 {
            return Err(Error::InsufficientData { needed: 2, got: t });
        }
        if data.iter().any(|ch| ch.len() != t) {
            return Err(Error::InvalidInput("channels have unequal lengths".into()));
        }
        if data.iter().any(|ch| ch.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidInput("series contains non-finite samples".into()));
        }
        if channel_names.len() != data.len() {
            return Err(Error::InvalidInput(format!(
                "{} channel names for {} channels",
                channel_names.len(),
                data.len()
            )));
        }
        if !(sample_interval > 0.0 && sample_interval.is_finite()) {
            return Err(Error::InvalidInput("sample interval must be positive".into()));
        }
        Ok(MultichannelSeries {
            data,
            channel_names,
            sample_interval,
        })
    }

    /// Channels named ch1..chd with unit sample interval.
    pub fn with_default_names(data: Vec<Vec<f64>>) -> Result<Self> {
        let names = (1..=data.len()).map(|i| format!("ch{i}")).collect();
        MultichannelSeries::new(data, names, 1.0)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data[0].len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // T >= 2 by construction
    }

    pub fn channel(&self, i: usize) -> &[f64] {
        &self.data[i]
    }

    pub fn channel_names(&self) -> &[String] {
        &self.channel_names
    }

    pub fn sample_interval(&self) -> f64 {
        self.sample_interval
    }

    pub fn channel_index(&self, name: &str) -> Option<usize> {
        self.channel_names.iter().position(|n| n == name)
    }

    /// A copy with the requested trend removed per channel.
    pub fn detrended(&self, mode: Detrend) -> MultichannelSeries {
        let t = self.len();
        let data = match mode {
            Detrend::None => self.data.clone(),
            Detrend::Mean => self
                .data
                .iter()
                .map(|ch| {
                    let mean = ch.iter().sum::<f64>() / t as f64;
                    ch.iter().map(|x| x - mean).collect()
                })
                .collect(),
            Detrend::Linear => self
                .data
                .iter()
                .map(|ch| {
                    // least-squares line over index n = 0..T-1
                    let n = t as f64;
                    let sx = (t * (t - 1)) as f64 / 2.0;
                    let sxx = ((t - 1) * t * (2 * t - 1)) as f64 / 6.0;
                    let sy: f64 = ch.iter().sum();
                    let sxy: f64 = ch.iter().enumerate().map(|(i, y)| i as f64 * y).sum();
                    let denom = n * sxx - sx * sx;
                    let slope = (n * sxy - sx * sy) / denom;
                    let intercept = (sy - slope * sx) / n;
                    ch.iter()
                        .enumerate()
                        .map(|(i, y)| y - (intercept + slope * i as f64))
                        .collect()
                })
                .collect(),
        };
        MultichannelSeries {
            data,
            channel_names: self.channel_names.clone(),
            sample_interval: self.sample_interval,
        }
    }
}
