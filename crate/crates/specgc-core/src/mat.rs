//! Dense square complex matrices at the small sizes this library needs.
//!
//! Everything here is written for clarity and determinism rather than raw
//! speed: channel counts are single digits and Gram matrices top out around
//! a few hundred rows, so O(n^3) dense kernels with fixed summation order
//! are the right tool.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            data.extend_from_slice(r);
        }
        CMat { n, data }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            data.extend(r.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        CMat { n, data }
    }

    /// Diagonal matrix from real entries.
    pub fn diag(entries: &[f64]) -> Self {
        let mut m = CMat::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMat { n: self.n, data }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMat { n: self.n, data }
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> CMat {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..self.n {
                    acc += self.at(i, j) * v[j];
                }
                acc
            })
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.at(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    /// (A + A*)/2.
    pub fn hermitian_part(&self) -> CMat {
        let mut out = self.add(&self.adjoint()).scale_re(0.5);
        for i in 0..self.n {
            let d = out.at(i, i);
            out.set(i, i, Complex64::new(d.re, 0.0));
        }
        out
    }

    /// Relative Frobenius deviation from Hermitian symmetry; 0 for the zero matrix.
    pub fn hermitian_deviation(&self) -> f64 {
        let norm = self.frob_norm();
        if norm == 0.0 {
            return 0.0;
        }
        self.sub(&self.adjoint()).frob_norm() / norm
    }

    /// Principal submatrix on the given (distinct, in-range) indices.
    pub fn principal_submatrix(&self, idx: &[usize]) -> CMat {
        let m = idx.len();
        let mut out = CMat::zeros(m);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.set(a, b, self.at(i, j));
            }
        }
        out
    }

    /// Cholesky factor L (lower triangular, positive diagonal) of a Hermitian
    /// positive definite matrix: A = L L*.
    pub fn cholesky(&self) -> Result<CMat> {
        let n = self.n;
        let mut l = CMat::zeros(n);
        for j in 0..n {
            let mut d = self.at(j, j).re;
            for k in 0..j {
                d -= l.at(j, k).norm_sqr();
            }
            if d <= 0.0 || d.is_nan() {
                return Err(Error::NotPositiveDefinite { pivot: d, index: j });
            }
            let djj = d.sqrt();
            l.set(j, j, Complex64::new(djj, 0.0));
            for i in (j + 1)..n {
                let mut s = self.at(i, j);
                for k in 0..j {
                    s -= l.at(i, k) * l.at(j, k).conj();
                }
                l.set(i, j, s / djj);
            }
        }
        Ok(l)
    }

    /// Solve A x = b for Hermitian positive definite A via Cholesky.
    pub fn solve_hermitian(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let l = self.cholesky()?;
        Ok(l.chol_solve(b))
    }

    /// Given self = L (lower Cholesky factor), solve L L* x = b.
    pub fn chol_solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let lik = self.at(i, k);
                y[i] = y[i] - lik * y[k];
            }
            y[i] /= self.at(i, i);
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let lki = self.at(k, i).conj();
                y[i] = y[i] - lki * y[k];
            }
            y[i] /= self.at(i, i);
        }
        y
    }

    /// LU decomposition with partial pivoting; returns (lu, perm, swaps).
    fn lu(&self) -> Result<(CMat, Vec<usize>)> {
        let n = self.n;
        let mut lu = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu.at(k, k).norm();
            for i in (k + 1)..n {
                let v = lu.at(i, k).norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(Error::SingularMatrix { pivot: 0.0, index: k });
            }
            if p != k {
                for j in 0..n {
                    let a = lu.at(k, j);
                    let b = lu.at(p, j);
                    lu.set(k, j, b);
                    lu.set(p, j, a);
                }
                perm.swap(k, p);
            }
            let pivot = lu.at(k, k);
            for i in (k + 1)..n {
                let m = lu.at(i, k) / pivot;
                lu.set(i, k, m);
                for j in (k + 1)..n {
                    let v = lu.at(i, j) - m * lu.at(k, j);
                    lu.set(i, j, v);
                }
            }
        }
        Ok((lu, perm))
    }

    /// Solve A X = B with partial-pivot LU; B given as a full matrix.
    pub fn solve_mat(&self, b: &CMat) -> Result<CMat> {
        assert_eq!(self.n, b.n);
        let n = self.n;
        let (lu, perm) = self.lu()?;
        let mut x = CMat::zeros(n);
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            for i in 0..n {
                col[i] = b.at(perm[i], j);
            }
            for i in 0..n {
                for k in 0..i {
                    let m = lu.at(i, k);
                    col[i] = col[i] - m * col[k];
                }
            }
            for i in (0..n).rev() {
                for k in (i + 1)..n {
                    let u = lu.at(i, k);
                    col[i] = col[i] - u * col[k];
                }
                col[i] /= lu.at(i, i);
            }
            for i in 0..n {
                x.set(i, j, col[i]);
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMat> {
        self.solve_mat(&CMat::identity(self.n))
    }

    pub fn det(&self) -> Complex64 {
        match self.lu() {
            Err(_) => Complex64::new(0.0, 0.0),
            Ok((lu, perm)) => {
                let mut d = Complex64::new(1.0, 0.0);
                for i in 0..self.n {
                    d *= lu.at(i, i);
                }
                // parity of the permutation
                let mut seen = vec![false; self.n];
                let mut sign = 1.0;
                for start in 0..self.n {
                    if seen[start] {
                        continue;
                    }
                    let mut len = 0;
                    let mut i = start;
                    while !seen[i] {
                        seen[i] = true;
                        i = perm[i];
                        len += 1;
                    }
                    if len % 2 == 0 {
                        sign = -sign;
                    }
                }
                d * sign
            }
        }
    }

    /// Householder QR: A = Q R with Q unitary and R upper triangular.
    pub fn qr(&self) -> (CMat, CMat) {
        let n = self.n;
        let mut r = self.clone();
        let mut q = CMat::identity(n);
        for k in 0..n.saturating_sub(1) {
            // Householder vector for column k below the diagonal.
            let mut norm_x = 0.0;
            for i in k..n {
                norm_x += r.at(i, k).norm_sqr();
            }
            let norm_x = norm_x.sqrt();
            if norm_x == 0.0 {
                continue;
            }
            let x0 = r.at(k, k);
            let phase = if x0.norm() > 0.0 {
                x0 / x0.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let alpha = -phase * norm_x;
            let mut v: Vec<Complex64> = (k..n).map(|i| r.at(i, k)).collect();
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            // R <- H R, H = I - 2 v v* / (v* v)
            for j in k..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for (t, vi) in v.iter().enumerate() {
                    dot += vi.conj() * r.at(k + t, j);
                }
                let f = dot * (2.0 / vnorm2);
                for (t, vi) in v.iter().enumerate() {
                    let cur = r.at(k + t, j);
                    r.set(k + t, j, cur - f * vi);
                }
            }
            // Q <- Q H
            for i in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for (t, vi) in v.iter().enumerate() {
                    dot += q.at(i, k + t) * vi;
                }
                let f = dot * (2.0 / vnorm2);
                for (t, vi) in v.iter().enumerate() {
                    let cur = q.at(i, k + t);
                    q.set(i, k + t, cur - f * vi.conj());
                }
            }
        }
        (q, r)
    }

    /// Eigenvalues and eigenvectors of a Hermitian matrix by cyclic complex
    /// Jacobi rotations. Returns eigenvalues ascending with matching
    /// eigenvector columns.
    pub fn eigh(&self) -> (Vec<f64>, CMat) {
        let n = self.n;
        let mut a = self.hermitian_part();
        let mut v = CMat::identity(n);
        if n == 1 {
            return (vec![a.at(0, 0).re], v);
        }
        let scale = a.frob_norm().max(f64::MIN_POSITIVE);
        for _sweep in 0..60 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a.at(i, j).norm_sqr();
                }
            }
            if off.sqrt() <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.at(p, q);
                    let abs_apq = apq.norm();
                    if abs_apq <= 1e-300 {
                        continue;
                    }
                    let phase = apq / abs_apq;
                    let app = a.at(p, p).re;
                    let aqq = a.at(q, q).re;
                    let tau = (aqq - app) / (2.0 * abs_apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // Column update: A <- A U, with U the rotation in the
                    // (p, q) plane carrying the dephasing of a_pq.
                    for i in 0..n {
                        let vp = a.at(i, p);
                        let vq = a.at(i, q);
                        a.set(i, p, vp * c - vq * (s * phase.conj()));
                        a.set(i, q, vp * s + vq * (c * phase.conj()));
                    }
                    // Row update: A <- U* A.
                    for j in 0..n {
                        let wp = a.at(p, j);
                        let wq = a.at(q, j);
                        a.set(p, j, wp * c - wq * (s * phase));
                        a.set(q, j, wp * s + wq * (c * phase));
                    }
                    // Eigenvector accumulation: V <- V U.
                    for i in 0..n {
                        let vp = v.at(i, p);
                        let vq = v.at(i, q);
                        v.set(i, p, vp * c - vq * (s * phase.conj()));
                        v.set(i, q, vp * s + vq * (c * phase.conj()));
                    }
                    let zero = Complex64::new(0.0, 0.0);
                    a.set(p, q, zero);
                    a.set(q, p, zero);
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let evals: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
        order.sort_by(|&i, &j| evals[i].partial_cmp(&evals[j]).unwrap());
        let sorted: Vec<f64> = order.iter().map(|&i| evals[i]).collect();
        let mut vecs = CMat::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            for i in 0..n {
                vecs.set(i, col, v.at(i, src));
            }
        }
        (sorted, vecs)
    }

    /// Eigenvalues only (Hermitian input), ascending.
    pub fn eigvals_hermitian(&self) -> Vec<f64> {
        self.eigh().0
    }

    /// Rebuild the matrix with eigenvalues clamped from below at `floor`.
    pub fn eigen_floored(&self, floor: f64) -> CMat {
        let n = self.n;
        let (vals, vecs) = self.eigh();
        let mut out = CMat::zeros(n);
        for (k, &lam) in vals.iter().enumerate() {
            let l = lam.max(floor);
            for i in 0..n {
                for j in 0..n {
                    let inc = vecs.at(i, k) * vecs.at(j, k).conj() * l;
                    out.add_at(i, j, inc);
                }
            }
        }
        out.hermitian_part()
    }
}
