//! Discrete prolate spheroidal sequences via the commuting symmetric
//! tridiagonal eigenproblem.
//!
//! The Slepian concentration operator commutes with a tridiagonal matrix
//! whose eigenvalues are well separated, so the tapers come out of Sturm
//! bisection plus inverse iteration instead of a dense solver. Taper k is
//! the eigenvector of the (k+1)-th largest tridiagonal eigenvalue; signs
//! are fixed deterministically.

use crate::error::{Error, Result};
use crate::oracle::SplitMix64;

/// Compute the first `count` orthonormal Slepian tapers of the given length
/// for time-bandwidth product `nw`.
pub fn dpss_tapers(len: usize, nw: f64, count: usize) -> Result<Vec<Vec<f64>>> {
    if len < 8 {
        return Err(Error::InvalidConfig(format!(
            "taper length {len} is too short"
        )));
    }
    if nw < 1.0 || nw.is_nan() || nw >= len as f64 / 2.0 {
        return Err(Error::InvalidConfig(format!(
            "time-bandwidth product {nw} out of range for length {len}"
        )));
    }
    if count == 0 || count as f64 > (2.0 * nw).floor() {
        return Err(Error::InvalidConfig(format!(
            "taper count {count} must be between 1 and floor(2 NW) = {}",
            (2.0 * nw).floor() as usize
        )));
    }

    let w = nw / len as f64;
    let cos2w = (2.0 * std::f64::consts::PI * w).cos();
    let diag: Vec<f64> = (0..len)
        .map(|t| {
            let half = (len as f64 - 1.0 - 2.0 * t as f64) / 2.0;
            half * half * cos2w
        })
        .collect();
    let off: Vec<f64> = (0..len - 1)
        .map(|t| ((t + 1) as f64 * (len - 1 - t) as f64) / 2.0)
        .collect();

    // Gershgorin interval
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..len {
        let r = if i == 0 { 0.0 } else { off[i - 1].abs() }
            + if i + 1 < len { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }

    let mut tapers: Vec<Vec<f64>> = Vec::with_capacity(count);
    for k in 0..count {
        // (len - 1 - k)-th eigenvalue in ascending order
        let target = len - 1 - k;
        let lambda = bisect_eigenvalue(&diag, &off, lo, hi, target);
        let mut v = inverse_iteration(&diag, &off, lambda, &tapers, k as u64);
        // deterministic sign: the absolutely largest entry is positive
        let mut arg = 0;
        for (i, &x) in v.iter().enumerate() {
            if x.abs() > v[arg].abs() {
                arg = i;
            }
        }
        if v[arg] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        tapers.push(v);
    }
    Ok(tapers)
}

/// Number of eigenvalues strictly below x (Sturm sequence count).
fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0usize;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_eigenvalue(diag: &[f64], off: &[f64], mut lo: f64, mut hi: f64, index: usize) -> f64 {
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if count_below(diag, off, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(lo.abs()).max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Solve (T - shift I) x = rhs for tridiagonal T with partial pivoting.
fn tridiag_solve_shifted(diag: &[f64], off: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut b: Vec<f64> = diag.iter().map(|d| d - shift).collect();
    let mut c: Vec<f64> = off.to_vec(); // superdiagonal, length n-1
    let mut f = vec![0.0f64; n]; // second superdiagonal fill-in
    let mut r = rhs.to_vec();
    for k in 0..n - 1 {
        let a = off[k]; // subdiagonal entry below row k
        if a.abs() > b[k].abs() {
            // swap rows k and k+1
            let (bk, ck) = (b[k], c[k]);
            b[k] = a;
            c[k] = b[k + 1];
            f[k] = if k + 1 < n - 1 { c[k + 1] } else { 0.0 };
            let m = bk / b[k];
            b[k + 1] = ck - m * c[k];
            if k + 1 < n - 1 {
                c[k + 1] = -m * f[k];
            }
            r.swap(k, k + 1);
            r[k + 1] -= m * r[k];
        } else {
            let pivot = if b[k] == 0.0 { 1e-300 } else { b[k] };
            let m = a / pivot;
            b[k + 1] -= m * c[k];
            r[k + 1] -= m * r[k];
        }
    }
    let mut x = vec![0.0f64; n];
    for k in (0..n).rev() {
        let mut s = r[k];
        if k + 1 < n {
            s -= c[k] * x[k + 1];
        }
        if k + 2 < n {
            s -= f[k] * x[k + 2];
        }
        let pivot = if b[k] == 0.0 { 1e-300 } else { b[k] };
        x[k] = s / pivot;
    }
    x
}

fn inverse_iteration(
    diag: &[f64],
    off: &[f64],
    lambda: f64,
    previous: &[Vec<f64>],
    salt: u64,
) -> Vec<f64> {
    let n = diag.len();
    let mut rng = SplitMix64::new(0x0D95_5E5E ^ salt);
    let mut v: Vec<f64> = (0..n).map(|_| rng.next_f64() - 0.5).collect();
    normalize(&mut v);
    for _ in 0..3 {
        v = tridiag_solve_shifted(diag, off, lambda, &v);
        for p in previous {
            let dot: f64 = v.iter().zip(p).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(p) {
                *x -= dot * y;
            }
        }
        normalize(&mut v);
    }
    v
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tapers_are_orthonormal() {
        let tapers = dpss_tapers(256, 4.0, 7).unwrap();
        for (i, a) in tapers.iter().enumerate() {
            for (j, b) in tapers.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (dot - want).abs() < 1e-8,
                    "tapers {i},{j}: dot {dot}"
                );
            }
        }
    }

    #[test]
    fn taper_k_has_k_sign_changes() {
        let tapers = dpss_tapers(128, 4.0, 6).unwrap();
        for (k, v) in tapers.iter().enumerate() {
            let mut changes = 0;
            let mut last = 0.0f64;
            for &x in v {
                if x == 0.0 {
                    continue;
                }
                if last != 0.0 && x.signum() != last.signum() {
                    changes += 1;
                }
                last = x;
            }
            assert_eq!(changes, k, "taper {k} has {changes} sign changes");
        }
    }

    #[test]
    fn leading_taper_is_concentrated_in_band() {
        // in-band energy through the sinc concentration kernel
        let n = 128usize;
        let nw = 4.0;
        let w = nw / n as f64;
        let tapers = dpss_tapers(n, nw, 4).unwrap();
        let mut concentrations = Vec::new();
        for v in &tapers {
            let mut acc = 0.0;
            for s in 0..n {
                for t in 0..n {
                    let kernel = if s == t {
                        2.0 * w
                    } else {
                        let d = s as f64 - t as f64;
                        (2.0 * std::f64::consts::PI * w * d).sin() / (std::f64::consts::PI * d)
                    };
                    acc += v[s] * kernel * v[t];
                }
            }
            concentrations.push(acc);
        }
        assert!(concentrations[0] > 0.9999, "lambda_0 = {}", concentrations[0]);
        assert!(concentrations[3] > 0.99, "lambda_3 = {}", concentrations[3]);
        for w in concentrations.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "concentrations not decreasing");
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(dpss_tapers(4, 4.0, 1).is_err());
        assert!(dpss_tapers(256, 0.4, 1).is_err());
        assert!(dpss_tapers(256, 4.0, 0).is_err());
        assert!(dpss_tapers(256, 4.0, 9).is_err()); // > floor(2 NW)
        assert!(dpss_tapers(256, 4.0, 8).is_ok());
    }
}
