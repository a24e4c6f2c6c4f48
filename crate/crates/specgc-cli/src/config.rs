//! Analysis configuration: a flat key = value format with [sections],
//! '#' or ';' comments, and repeatable [grouping] sections. Every default
//! can be overridden; unknown keys are errors so typos surface immediately.

use std::path::PathBuf;

use specgc_core::matrix_factor::FactorizationConfig;
use specgc_core::series::Detrend;
use specgc_core::estimation::{EstimationMethod, EstimatorConfig};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub estimator: EstimatorConfig,
    pub grid_size: usize,
    pub factorization: FactorizationConfig,
    pub lags: Vec<usize>,
    pub threshold: f64,
    /// (source names, target names) per requested grouping.
    pub groupings: Vec<(Vec<String>, Vec<String>)>,
    pub fixture_length: usize,
    pub sample_interval: f64,
    pub psd_csv: Option<PathBuf>,
    pub factor_csv: Option<PathBuf>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            estimator: EstimatorConfig::default(),
            grid_size: 1024,
            factorization: FactorizationConfig::default(),
            lags: vec![1, 2, 4],
            threshold: 0.01,
            groupings: Vec::new(),
            fixture_length: 32768,
            sample_interval: 1.0,
            psd_csv: None,
            factor_csv: None,
        }
    }
}

impl AnalysisConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = AnalysisConfig::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = lineno + 1;
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = name.trim().to_string();
                if section == "grouping" {
                    cfg.groupings.push((Vec::new(), Vec::new()));
                }
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::input(format!("config line {lineno}: expected key = value"))
            })?;
            let key = key.trim();
            let value = value.trim();
            cfg.apply(&section, key, value)
                .map_err(|msg| CliError::input(format!("config line {lineno}: {msg}")))?;
        }
        for (i, (src, tgt)) in cfg.groupings.iter().enumerate() {
            if src.is_empty() || tgt.is_empty() {
                return Err(CliError::input(format!(
                    "grouping {} needs both source and target channel lists",
                    i + 1
                )));
            }
        }
        Ok(cfg)
    }

    fn apply(&mut self, section: &str, key: &str, value: &str) -> Result<(), String> {
        match section {
            "estimator" => match key {
                "method" => {
                    self.estimator.method = match value {
                        "welch" => EstimationMethod::Welch,
                        "blackman_tukey" => EstimationMethod::BlackmanTukey,
                        "multitaper" => EstimationMethod::Multitaper,
                        other => return Err(format!("unknown estimator method '{other}'")),
                    }
                }
                "segment_length" => self.estimator.segment_length = parse(value)?,
                "overlap" => self.estimator.overlap_fraction = parse(value)?,
                "max_lag" => self.estimator.max_lag = parse(value)?,
                "nw" => self.estimator.taper_bandwidth_product = parse(value)?,
                "tapers" => self.estimator.taper_count = parse(value)?,
                "detrend" => {
                    self.estimator.detrend = match value {
                        "none" => Detrend::None,
                        "mean" => Detrend::Mean,
                        "linear" => Detrend::Linear,
                        other => return Err(format!("unknown detrend mode '{other}'")),
                    }
                }
                "regularization" => self.estimator.regularization = parse(value)?,
                other => return Err(format!("unknown key '{other}' in [estimator]")),
            },
            "grid" => match key {
                "size" => self.grid_size = parse(value)?,
                other => return Err(format!("unknown key '{other}' in [grid]")),
            },
            "factorization" => match key {
                "tolerance" => self.factorization.tol = parse(value)?,
                "max_iter" => self.factorization.max_iter = parse(value)?,
                "max_coeff" => self.factorization.max_coeff = parse(value)?,
                other => return Err(format!("unknown key '{other}' in [factorization]")),
            },
            "analysis" => match key {
                "lags" => {
                    self.lags = value
                        .split(',')
                        .map(|s| parse(s.trim()))
                        .collect::<Result<_, _>>()?
                }
                "threshold" => self.threshold = parse(value)?,
                other => return Err(format!("unknown key '{other}' in [analysis]")),
            },
            "grouping" => {
                let slot = self
                    .groupings
                    .last_mut()
                    .ok_or_else(|| "grouping keys need a [grouping] section".to_string())?;
                let names: Vec<String> = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                match key {
                    "source" => slot.0 = names,
                    "target" => slot.1 = names,
                    other => return Err(format!("unknown key '{other}' in [grouping]")),
                }
            }
            "fixture" => match key {
                "length" => self.fixture_length = parse(value)?,
                "sample_interval" => self.sample_interval = parse(value)?,
                other => return Err(format!("unknown key '{other}' in [fixture]")),
            },
            "output" => match key {
                "psd_csv" => self.psd_csv = Some(PathBuf::from(value)),
                "factor_csv" => self.factor_csv = Some(PathBuf::from(value)),
                other => return Err(format!("unknown key '{other}' in [output]")),
            },
            "" => return Err(format!("key '{key}' appears before any [section]")),
            other => return Err(format!("unknown section [{other}]")),
        }
        Ok(())
    }
}

fn parse<T: std::str::FromStr>(value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("cannot parse '{value}'"))
}
