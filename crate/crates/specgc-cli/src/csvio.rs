//! CSV input and plot-data output.
//!
//! Input format: first row is the header of channel names, each later row
//! is one time sample, columns are channels, comma separator, no missing
//! values. Malformed rows are reported with their line number.

use std::fmt::Write as _;
use std::path::Path;

use specgc_core::matrix_factor::SpectralFactor;
use specgc_core::psd::SpectralDensityMatrix;
use specgc_core::series::MultichannelSeries;

use crate::CliError;

pub fn read_series(path: &Path, sample_interval: f64) -> Result<MultichannelSeries, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::input(format!("{}: empty file", path.display())))?;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    if names.iter().any(|n| n.is_empty()) {
        return Err(CliError::input(format!(
            "{}: header has an empty channel name",
            path.display()
        )));
    }
    let d = names.len();
    let mut data: Vec<Vec<f64>> = vec![Vec::new(); d];
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != d {
            return Err(CliError::input(format!(
                "{} line {lineno}: {} fields, expected {d}",
                path.display(),
                fields.len()
            )));
        }
        for (ch, field) in fields.iter().enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| {
                CliError::input(format!(
                    "{} line {lineno}: cannot parse '{}' as a number",
                    path.display(),
                    field.trim()
                ))
            })?;
            data[ch].push(value);
        }
    }
    MultichannelSeries::new(data, names, sample_interval)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Full complex PSD samples: theta plus re/im column pairs per entry.
pub fn write_psd_csv(path: &Path, psd: &SpectralDensityMatrix) -> Result<(), CliError> {
    let d = psd.dim();
    let mut out = String::new();
    out.push_str("theta");
    for i in 1..=d {
        for j in 1..=d {
            let _ = write!(out, ",S_{i}_{j}_re,S_{i}_{j}_im");
        }
    }
    out.push('\n');
    for (k, theta) in psd.grid().thetas().enumerate() {
        let _ = write!(out, "{theta}");
        let v = psd.at(k);
        for i in 0..d {
            for j in 0..d {
                let z = v.at(i, j);
                let _ = write!(out, ",{},{}", z.re, z.im);
            }
        }
        out.push('\n');
    }
    std::fs::write(path, out)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

/// Per-coefficient Frobenius norms, for plotting factor decay.
pub fn write_factor_norms_csv(path: &Path, factor: &SpectralFactor) -> Result<(), CliError> {
    let mut out = String::from("n,frobenius_norm\n");
    for (n, c) in factor.coeffs().iter().enumerate() {
        let _ = writeln!(out, "{n},{}", c.frob_norm());
    }
    std::fs::write(path, out)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

/// Full factor coefficients: n, norm, then re/im column pairs per entry.
pub fn write_factor_csv(path: &Path, factor: &SpectralFactor) -> Result<(), CliError> {
    let d = factor.dim();
    let mut out = String::new();
    out.push_str("n,frobenius_norm");
    for i in 1..=d {
        for j in 1..=d {
            let _ = write!(out, ",c_{i}_{j}_re,c_{i}_{j}_im");
        }
    }
    out.push('\n');
    for (n, c) in factor.coeffs().iter().enumerate() {
        let _ = write!(out, "{n},{}", c.frob_norm());
        for i in 0..d {
            for j in 0..d {
                let z = c.at(i, j);
                let _ = write!(out, ",{},{}", z.re, z.im);
            }
        }
        out.push('\n');
    }
    std::fs::write(path, out)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}
