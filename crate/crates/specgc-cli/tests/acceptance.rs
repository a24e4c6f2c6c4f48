//! Acceptance suite for the whole pipeline. Each test prints one PASS line
//! when its criterion holds (visible with --nocapture); tolerances are
//! pinned in the assertions.
//!
//! Run with: cargo test -p specgc-cli --test acceptance -- --nocapture

use std::path::{Path, PathBuf};
use std::process::Command;

use num_complex::Complex64;
use specgc_core::causality::{causality_index, GroupSpec};
use specgc_core::grid::{coeffs_to_grid, coeffs_to_grid_scalar, FrequencyGrid};
use specgc_core::mat::CMat;
use specgc_core::matrix_factor::{
    factor_residual, matrix_factorize, wilson_factorize, FactorizationConfig, SpectralFactor,
};
use specgc_core::oracle::{finite_history_error, simulate_var, SplitMix64};
use specgc_core::prediction::{grouped_prediction_error, joint_prediction_error};
use specgc_core::psd::SpectralDensityMatrix;
use specgc_core::scalar_factor::scalar_factorize;
use specgc_core::var::{var_autocovariance, var_psd, VarModel};

/// ln(e_restricted^2 / e_full^2) for the coupled fixture, source {2},
/// target {1}, lag 1. Closed form, spectral route, and finite-history
/// oracle agree on this to thirteen digits.
const COUPLED_LOG_INDEX_2_TO_1: f64 = 0.232385694760336;

fn coupled_model() -> VarModel {
    VarModel::new(
        vec![vec![vec![0.5, 0.4], vec![0.0, 0.7]]],
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
    )
    .unwrap()
}

/// Strictly positive random trigonometric polynomial of the given degree.
fn random_positive_density(rng: &mut SplitMix64, degree: usize, grid: &FrequencyGrid) -> Vec<f64> {
    let coeffs: Vec<(f64, f64)> = (0..=degree)
        .map(|_| (rng.next_f64() - 0.5, rng.next_f64() - 0.5))
        .collect();
    let raw: Vec<f64> = grid
        .thetas()
        .map(|t| {
            coeffs
                .iter()
                .enumerate()
                .map(|(n, (a, b))| a * (n as f64 * t).cos() + b * (n as f64 * t).sin())
                .sum()
        })
        .collect();
    let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let shift = -min + 0.05 * (max - min).max(1.0);
    raw.iter().map(|x| x + shift).collect()
}

/// Random spectrum S = Q Q^* + eps I with Q a matrix polynomial.
fn random_pd_spectrum(
    rng: &mut SplitMix64,
    d: usize,
    degree: usize,
    grid: &FrequencyGrid,
    eps: f64,
) -> SpectralDensityMatrix {
    let q_coeffs: Vec<CMat> = (0..=degree)
        .map(|_| {
            let rows: Vec<Vec<Complex64>> = (0..d)
                .map(|_| {
                    (0..d)
                        .map(|_| Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                        .collect()
                })
                .collect();
            CMat::from_rows(&rows)
        })
        .collect();
    let q_grid = coeffs_to_grid(&q_coeffs, grid);
    let values: Vec<CMat> = q_grid
        .iter()
        .map(|q| {
            q.mul(&q.adjoint())
                .add(&CMat::identity(d).scale_re(eps))
                .hermitian_part()
        })
        .collect();
    SpectralDensityMatrix::new(*grid, values).unwrap()
}

fn log_det_grid_mean(s: &SpectralDensityMatrix) -> f64 {
    s.values()
        .iter()
        .map(|v| v.eigvals_hermitian().iter().map(|l| l.ln()).sum::<f64>())
        .sum::<f64>()
        / s.grid().size() as f64
}

#[test]
fn scalar_factorization_identity_and_szego() {
    let grid = FrequencyGrid::new(1024).unwrap();
    let mut rng = SplitMix64::new(0xACC0_0001);
    for trial in 0..50 {
        let f = random_positive_density(&mut rng, 8, &grid);
        let factor = scalar_factorize(&f, 200).unwrap();
        let rebuilt = coeffs_to_grid_scalar(&factor.coeffs, &grid);
        let max_f = f.iter().cloned().fold(0.0, f64::max);
        let worst = rebuilt
            .iter()
            .zip(&f)
            .map(|(r, want)| (r.norm_sqr() - want).abs())
            .fold(0.0, f64::max)
            / max_f;
        assert!(worst <= 1e-8, "trial {trial}: max grid error {worst}");

        let geo = (f.iter().map(|x| x.ln()).sum::<f64>() / f.len() as f64).exp();
        let c0sq = factor.coeffs[0].re * factor.coeffs[0].re;
        assert!(
            ((c0sq - geo) / geo).abs() <= 1e-8,
            "trial {trial}: c_0^2 = {c0sq} vs geometric mean {geo}"
        );
    }
    println!("PASS scalar factorization identity and outer normalization (50 densities)");
}

#[test]
fn matrix_factorization_identity_and_outer_determinant() {
    let grid = FrequencyGrid::new(1024).unwrap();
    let mut rng = SplitMix64::new(0xACC0_0002);
    let cfg = FactorizationConfig::default();
    for trial in 0..50 {
        let d = 2 + trial % 3;
        let s = random_pd_spectrum(&mut rng, d, 4, &grid, 1e-3);
        let factor = matrix_factorize(&s, &cfg).unwrap();
        let resid = factor_residual(&s, &factor).unwrap();
        assert!(resid <= 1e-8, "trial {trial} (d={d}): residual {resid}");

        let det0 = factor.coeff(0).det().norm();
        let geo = log_det_grid_mean(&s).exp();
        assert!(
            ((det0 * det0 - geo) / geo).abs() <= 1e-6,
            "trial {trial} (d={d}): |det c_0|^2 = {} vs {geo}",
            det0 * det0
        );
    }
    println!("PASS matrix factorization identity and outer determinant (50 spectra, d in 2..=4)");
}

#[test]
fn ar1_lag_errors_match_closed_form_and_oracle() {
    let a: f64 = 0.5;
    let model = VarModel::new(vec![vec![vec![a]]], vec![vec![1.0]]).unwrap();
    let grid = FrequencyGrid::new(1024).unwrap();
    let s = var_psd(&model, &grid).unwrap();
    let factor = matrix_factorize(&s, &FactorizationConfig::default()).unwrap();
    let acov = var_autocovariance(&model, 80).unwrap();
    for lag in 1..=8usize {
        let spectral = joint_prediction_error(&factor, lag).unwrap().value;
        let closed = ((1.0 - a.powi(2 * lag as i32)) / (1.0 - a * a)).sqrt();
        assert!(
            (spectral - closed).abs() <= 1e-6,
            "lag {lag}: {spectral} vs closed form {closed}"
        );
        let oracle = finite_history_error(&acov, &[0], &[0], lag, 64).unwrap().value;
        assert!(
            ((spectral - oracle) / oracle).abs() <= 1e-3,
            "lag {lag}: {spectral} vs oracle {oracle}"
        );
    }
    println!("PASS lag errors match the closed form and the finite-history oracle (AR(1), L=1..8)");
}

#[test]
fn var_grouped_errors_match_oracle() {
    let model = coupled_model();
    let grid = FrequencyGrid::new(1024).unwrap();
    let s = var_psd(&model, &grid).unwrap();
    let factor = matrix_factorize(&s, &FactorizationConfig::default()).unwrap();
    let acov = var_autocovariance(&model, 80).unwrap();
    for lag in [1usize, 2, 4] {
        let joint = joint_prediction_error(&factor, lag).unwrap().value;
        let joint_oracle = finite_history_error(&acov, &[0, 1], &[0, 1], lag, 64)
            .unwrap()
            .value;
        assert!(
            ((joint - joint_oracle) / joint_oracle).abs() <= 1e-3,
            "joint lag {lag}: {joint} vs {joint_oracle}"
        );
        let grouped = grouped_prediction_error(&factor, &[0], lag).unwrap().value;
        let grouped_oracle = finite_history_error(&acov, &[0, 1], &[0], lag, 64)
            .unwrap()
            .value;
        assert!(
            ((grouped - grouped_oracle) / grouped_oracle).abs() <= 1e-3,
            "grouped lag {lag}: {grouped} vs {grouped_oracle}"
        );
    }
    let grouped2 = grouped_prediction_error(&factor, &[0], 2).unwrap().value;
    assert!(
        (grouped2 - 1.41f64.sqrt()).abs() <= 1e-6,
        "grouped lag 2: {grouped2} vs sqrt(1.41)"
    );
    println!("PASS joint and grouped errors match the oracle (VAR(1), L in {{1,2,4}})");
}

#[test]
fn causality_null_and_direction() {
    let grid = FrequencyGrid::new(1024).unwrap();
    let cfg = FactorizationConfig::default();

    // block-diagonal independence null, both directions
    let values: Vec<CMat> = grid
        .thetas()
        .map(|t| {
            let f = |a: f64| 1.0 / (1.0 - 2.0 * a * t.cos() + a * a);
            CMat::diag(&[f(0.5), f(0.7)])
        })
        .collect();
    let s_ind = SpectralDensityMatrix::new(grid, values).unwrap();
    for (src, tgt) in [(1usize, 0usize), (0, 1)] {
        let idx = causality_index(&s_ind, &GroupSpec::new(vec![src], vec![tgt]).unwrap(), 1, &cfg)
            .unwrap();
        assert!(
            idx.log_index.abs() <= 1e-6,
            "independent {src}->{tgt}: {}",
            idx.log_index
        );
    }

    // coupled fixture: positive one way (pinned), null the other
    let s = var_psd(&coupled_model(), &grid).unwrap();
    let forward = causality_index(&s, &GroupSpec::new(vec![1], vec![0]).unwrap(), 1, &cfg).unwrap();
    assert!(forward.log_index > 0.0);
    assert!(
        (forward.log_index - COUPLED_LOG_INDEX_2_TO_1).abs() <= 1e-9,
        "2->1: {} vs pinned {COUPLED_LOG_INDEX_2_TO_1}",
        forward.log_index
    );
    let backward = causality_index(&s, &GroupSpec::new(vec![0], vec![1]).unwrap(), 1, &cfg).unwrap();
    assert!(backward.log_index <= 2e-3, "1->2: {}", backward.log_index);
    println!("PASS causality null on independent spectra and pinned directional value");
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_csv(path: &Path, series: &specgc_core::series::MultichannelSeries) {
    let mut out = String::new();
    out.push_str(&series.channel_names().join(","));
    out.push('\n');
    for n in 0..series.len() {
        let row: Vec<String> = (0..series.dim())
            .map(|ch| format!("{}", series.channel(ch)[n]))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out).unwrap();
}

#[test]
fn end_to_end_cli_estimates_the_causality_structure() {
    let model = coupled_model();
    let t = 1 << 17;
    let mut forward_hits = 0usize;
    for seed in 1..=5u64 {
        let series = simulate_var(&model, t, seed).unwrap();
        let csv = tmp(&format!("acceptance_e2e_{seed}.csv"));
        write_csv(&csv, &series);
        let report_path = tmp(&format!("acceptance_e2e_{seed}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_specgc"))
            .args(["analyze", "--input"])
            .arg(&csv)
            .args(["--output"])
            .arg(&report_path)
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "seed {seed} stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let report: serde_json::Value =
            serde_json::from_slice(&std::fs::read(&report_path).unwrap()).unwrap();
        let mut forward = f64::NAN;
        let mut backward = f64::NAN;
        for g in report["groupings"].as_array().unwrap() {
            let src = g["source"][0].as_str().unwrap();
            let idx1 = g["indices"]
                .as_array()
                .unwrap()
                .iter()
                .find(|e| e["lag"] == 1)
                .unwrap();
            let v = idx1["log_index"].as_f64().unwrap();
            if src == "ch2" {
                forward = v;
            } else {
                backward = v;
            }
        }
        let rel = (forward - COUPLED_LOG_INDEX_2_TO_1).abs() / COUPLED_LOG_INDEX_2_TO_1;
        if rel <= 0.25 {
            forward_hits += 1;
        }
        assert!(
            backward < 0.05,
            "seed {seed}: reverse log index {backward} should stay near 0"
        );
    }
    assert!(
        forward_hits >= 4,
        "estimated forward index within 25% of {COUPLED_LOG_INDEX_2_TO_1} on only {forward_hits}/5 seeds"
    );
    println!(
        "PASS end-to-end CLI estimation: forward within 25% on {forward_hits}/5 seeds, reverse < 0.05 on all"
    );
}

#[test]
fn invariance_suite() {
    let mut rng = SplitMix64::new(0xACC0_0007);
    let grid = FrequencyGrid::new(256).unwrap();
    let cfg = FactorizationConfig::default();

    // non-negativity of the log index on random spectra
    for trial in 0..100 {
        let s = random_pd_spectrum(&mut rng, 3, 3, &grid, 1e-3);
        let (src, tgt) = match trial % 3 {
            0 => (vec![2], vec![0, 1]),
            1 => (vec![0], vec![1, 2]),
            _ => (vec![1, 2], vec![0]),
        };
        let lag = 1 + trial % 4;
        let idx = causality_index(&s, &GroupSpec::new(src, tgt).unwrap(), lag, &cfg).unwrap();
        assert!(
            idx.log_index >= -1e-6,
            "trial {trial}: log index {}",
            idx.log_index
        );
    }

    // scaling invariance: conjugation by a positive diagonal matrix
    for trial in 0..100 {
        let s = random_pd_spectrum(&mut rng, 2, 3, &grid, 1e-2);
        let lambda = 0.25 + 4.0 * rng.next_f64();
        let scale = CMat::diag(&[lambda, 1.0]);
        let scaled: Vec<CMat> = s
            .values()
            .iter()
            .map(|v| scale.mul(v).mul(&scale).hermitian_part())
            .collect();
        let s2 = SpectralDensityMatrix::new(*s.grid(), scaled).unwrap();
        let spec = GroupSpec::new(vec![1], vec![0]).unwrap();
        let a = causality_index(&s, &spec, 1, &cfg).unwrap();
        let b = causality_index(&s2, &spec, 1, &cfg).unwrap();
        assert!(
            (a.log_index - b.log_index).abs() <= 1e-8,
            "trial {trial}: {} vs {}",
            a.log_index,
            b.log_index
        );
    }

    // unitary invariance of joint errors
    for trial in 0..100 {
        let coeffs: Vec<CMat> = (0..8)
            .map(|_| {
                CMat::from_rows(&[
                    vec![
                        Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
                        Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
                    ],
                    vec![
                        Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
                        Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
                    ],
                ])
            })
            .collect();
        let factor = SpectralFactor::new(coeffs.clone(), 0.0);
        // random unitary from the QR of a random matrix
        let m = CMat::from_rows(&[
            vec![
                Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
                Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
            ],
            vec![
                Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
                Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
            ],
        ]);
        let (q, _) = m.qr();
        let rotated = SpectralFactor::new(coeffs.iter().map(|c| c.mul(&q)).collect(), 0.0);
        for lag in [1usize, 3, 8] {
            let a = joint_prediction_error(&factor, lag).unwrap().value;
            let b = joint_prediction_error(&rotated, lag).unwrap().value;
            assert!((a - b).abs() <= 1e-8 * a.max(1.0), "trial {trial} lag {lag}");
            let ga = grouped_prediction_error(&factor, &[0], lag).unwrap().value;
            let gb = grouped_prediction_error(&rotated, &[0], lag).unwrap().value;
            assert!((ga - gb).abs() <= 1e-8 * ga.max(1.0), "trial {trial} lag {lag}");
        }
    }

    // monotonicity of prediction errors in the lag
    for trial in 0..100 {
        let coeffs: Vec<CMat> = (0..16)
            .map(|n| {
                let damp = 0.7f64.powi(n);
                CMat::from_rows(&[
                    vec![
                        Complex64::new(damp * (rng.next_f64() - 0.5), 0.0),
                        Complex64::new(damp * (rng.next_f64() - 0.5), 0.0),
                    ],
                    vec![
                        Complex64::new(damp * (rng.next_f64() - 0.5), 0.0),
                        Complex64::new(damp * (rng.next_f64() - 0.5), 0.0),
                    ],
                ])
            })
            .collect();
        let factor = SpectralFactor::new(coeffs, 0.0);
        let mut prev = 0.0;
        for lag in 1..=16 {
            let e = joint_prediction_error(&factor, lag).unwrap().value;
            assert!(e >= prev - 1e-12, "trial {trial}: lag {lag} decreased");
            prev = e;
        }
    }

    // oracle errors nonincreasing in history length
    for trial in 0..100 {
        let a11 = 0.9 * (rng.next_f64() - 0.5);
        let a12 = 0.6 * (rng.next_f64() - 0.5);
        let a22 = 0.9 * (rng.next_f64() - 0.5);
        let model = match VarModel::new(
            vec![vec![vec![a11, a12], vec![0.1, a22]]],
            vec![vec![1.0, 0.2], vec![0.2, 1.5]],
        ) {
            Ok(m) => m,
            Err(_) => continue, // rejected as unstable; draw again next trial
        };
        let acov = var_autocovariance(&model, 40).unwrap();
        let mut prev = f64::INFINITY;
        for n in [0usize, 1, 2, 4, 8, 16, 32] {
            let e = finite_history_error(&acov, &[0, 1], &[0], 2, n).unwrap().value;
            assert!(
                e <= prev + 1e-10,
                "trial {trial}: history {n} raised the error"
            );
            prev = e;
        }
    }
    println!("PASS invariance suite (non-negativity, scaling, unitary, monotonicity; 100 trials each)");
}

#[test]
fn univariate_matrix_and_scalar_factorizations_agree() {
    let mut rng = SplitMix64::new(0xACC0_0008);
    let grid = FrequencyGrid::new(1024).unwrap();
    let cfg = FactorizationConfig {
        max_coeff: 48,
        ..Default::default()
    };
    for trial in 0..20 {
        let density = random_positive_density(&mut rng, 6, &grid);
        let values: Vec<CMat> = density
            .iter()
            .map(|&x| CMat::from_real_rows(&[vec![x]]))
            .collect();
        let s = SpectralDensityMatrix::new(grid, values).unwrap();
        let scalar = scalar_factorize(&density, 48).unwrap();

        // the public path delegates
        let delegated = matrix_factorize(&s, &cfg).unwrap();
        for (n, c) in scalar.coeffs.iter().enumerate() {
            assert!(
                (delegated.coeff(n).at(0, 0) - c).norm() <= 1e-8,
                "trial {trial}: delegated coefficient {n}"
            );
        }

        // the Wilson engine agrees with the cepstral route independently
        let wilson = wilson_factorize(&s, &cfg).unwrap();
        for (n, c) in scalar.coeffs.iter().enumerate() {
            assert!(
                (wilson.coeff(n).at(0, 0) - c).norm() <= 1e-8,
                "trial {trial}: engine coefficient {n} differs from scalar route"
            );
        }
    }
    println!("PASS univariate agreement between matrix and scalar factorizations (20 spectra)");
}
