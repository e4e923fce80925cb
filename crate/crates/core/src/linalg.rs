//! Self-contained dense and banded linear algebra at desk scale.
//!
//! The solvers here are deliberately small: a banded Cholesky for the
//! implicit time step, a cyclic Jacobi eigensolver for the limit-system
//! modal analysis, Gauss-Jordan inverses for 6×6 blocks, and a
//! scaling-and-squaring matrix exponential for the homogeneous-relaxation
//! oracle. No external numerics dependency is needed at this problem size.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    /// Cholesky hit a nonpositive pivot; the matrix is not positive definite.
    #[error("matrix is not positive definite (pivot {pivot:.3e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    /// Jacobi sweep budget exhausted before off-diagonals vanished.
    #[error("Jacobi eigensolver failed to converge after {sweeps} sweeps (off-diagonal norm {offdiag:.3e})")]
    NoConvergence { sweeps: usize, offdiag: f64 },
    /// Gauss-Jordan pivot too small to invert.
    #[error("singular small matrix (pivot {pivot:.3e} at column {col})")]
    Singular { col: usize, pivot: f64 },
}

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMat {
    pub n: usize,
    data: Vec<f64>,
}

impl DenseMat {
    pub fn zeros(n: usize) -> Self {
        DenseMat {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let mut s = 0.0;
            for (a, b) in row.iter().zip(x.iter()) {
                s += a * b;
            }
            y[i] = s;
        }
        y
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                dev = dev.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        dev
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// columns of the returned matrix. Rotations are skipped whenever the
/// off-diagonal entry is exactly negligible, so block-diagonal inputs keep
/// their block structure: eigenvectors of decoupled sub-problems never mix,
/// even for degenerate eigenvalues across blocks.
pub fn jacobi_eigen(a: &DenseMat) -> Result<(Vec<f64>, DenseMat), LinalgError> {
    let n = a.n;
    let mut m = a.clone();
    let mut v = DenseMat::identity(n);
    if n == 0 {
        return Ok((Vec::new(), v));
    }
    let scale = m.max_abs().max(1.0);
    let max_sweeps = 50;
    for sweep in 0..max_sweeps {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m.get(p, q) * m.get(p, q);
            }
        }
        let off = off.sqrt();
        if off <= 1e-15 * scale * n as f64 {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| m.get(i, i).partial_cmp(&m.get(j, j)).unwrap());
            let values: Vec<f64> = order.iter().map(|&i| m.get(i, i)).collect();
            let mut vectors = DenseMat::zeros(n);
            for (col, &src) in order.iter().enumerate() {
                for row in 0..n {
                    vectors.set(row, col, v.get(row, src));
                }
            }
            return Ok((values, vectors));
        }
        // Rotation threshold shrinks with the sweep count (classical schedule).
        let threshold = if sweep < 3 {
            0.2 * off * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let g = 100.0 * apq.abs();
                if sweep > 3
                    && m.get(p, p).abs() + g == m.get(p, p).abs()
                    && m.get(q, q).abs() + g == m.get(q, q).abs()
                {
                    m.set(p, q, 0.0);
                    m.set(q, p, 0.0);
                    continue;
                }
                if apq * apq <= threshold {
                    continue;
                }
                let theta = 0.5 * (m.get(q, q) - m.get(p, p)) / apq;
                let t = if theta.abs() > 1e12 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let app = m.get(p, p);
                let aqq = m.get(q, q);
                m.set(p, p, app - t * apq);
                m.set(q, q, aqq + t * apq);
                m.set(p, q, 0.0);
                m.set(q, p, 0.0);
                for r in 0..n {
                    if r != p && r != q {
                        let arp = m.get(r, p);
                        let arq = m.get(r, q);
                        m.set(r, p, arp - s * (arq + tau * arp));
                        m.set(p, r, m.get(r, p));
                        m.set(r, q, arq + s * (arp - tau * arq));
                        m.set(q, r, m.get(r, q));
                    }
                }
                for r in 0..n {
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, vrp - s * (vrq + tau * vrp));
                    v.set(r, q, vrq + s * (vrp - tau * vrq));
                }
            }
        }
    }
    let mut off = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            off += m.get(p, q) * m.get(p, q);
        }
    }
    Err(LinalgError::NoConvergence {
        sweeps: max_sweeps,
        offdiag: off.sqrt(),
    })
}

/// Largest eigenvalue of a symmetric 3×3 matrix.
pub fn sym3_max_eigenvalue(q: &[[f64; 3]; 3]) -> f64 {
    let mut m = DenseMat::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            m.set(i, j, 0.5 * (q[i][j] + q[j][i]));
        }
    }
    let (values, _) = jacobi_eigen(&m).expect("3x3 Jacobi always converges");
    values[2]
}

/// Symmetric banded matrix stored by diagonals: `band[k][i]` holds
/// `A[i+k][i]` for k = 0..=half_bandwidth (lower diagonals only).
#[derive(Debug, Clone)]
pub struct BandedSpd {
    pub n: usize,
    pub half_bandwidth: usize,
    band: Vec<Vec<f64>>,
}

impl BandedSpd {
    pub fn zeros(n: usize, half_bandwidth: usize) -> Self {
        let band = (0..=half_bandwidth)
            .map(|k| vec![0.0; n.saturating_sub(k)])
            .collect();
        BandedSpd {
            n,
            half_bandwidth,
            band,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let k = hi - lo;
        if k > self.half_bandwidth {
            0.0
        } else {
            self.band[k][lo]
        }
    }

    /// Set `A[i][j]` (and its mirror) inside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let k = hi - lo;
        assert!(k <= self.half_bandwidth, "entry outside band");
        self.band[k][lo] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let k = hi - lo;
        assert!(k <= self.half_bandwidth, "entry outside band");
        self.band[k][lo] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.half_bandwidth);
            let hi = (i + self.half_bandwidth).min(self.n - 1);
            let mut s = 0.0;
            for j in lo..=hi {
                s += self.get(i, j) * x[j];
            }
            y[i] = s;
        }
        y
    }

    /// In-place banded Cholesky factorization A = L Lᵀ.
    pub fn cholesky(mut self) -> Result<BandedCholesky, LinalgError> {
        let n = self.n;
        let hb = self.half_bandwidth;
        for j in 0..n {
            let start = j.saturating_sub(hb);
            let mut diag = self.band[0][j];
            for k in start..j {
                let l_jk = self.band[j - k][k];
                diag -= l_jk * l_jk;
            }
            if diag <= 0.0 {
                return Err(LinalgError::NotPositiveDefinite {
                    row: j,
                    pivot: diag,
                });
            }
            let l_jj = diag.sqrt();
            self.band[0][j] = l_jj;
            let last = (j + hb).min(n - 1);
            for i in (j + 1)..=last {
                let mut v = self.band[i - j][j];
                let start_i = i.saturating_sub(hb).max(start);
                for k in start_i..j {
                    v -= self.band[i - k][k] * self.band[j - k][k];
                }
                self.band[i - j][j] = v / l_jj;
            }
        }
        Ok(BandedCholesky { factor: self })
    }
}

/// Cholesky factor of a banded SPD matrix; reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    factor: BandedSpd,
}

impl BandedCholesky {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.factor.n;
        let hb = self.factor.half_bandwidth;
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        // forward: L y = b
        for i in 0..n {
            let start = i.saturating_sub(hb);
            let mut s = y[i];
            for k in start..i {
                s -= self.factor.band[i - k][k] * y[k];
            }
            y[i] = s / self.factor.band[0][i];
        }
        // backward: Lᵀ x = y
        for i in (0..n).rev() {
            let last = (i + hb).min(n - 1);
            let mut s = y[i];
            for k in (i + 1)..=last {
                s -= self.factor.band[k - i][i] * y[k];
            }
            y[i] = s / self.factor.band[0][i];
        }
        y
    }
}

/// Invert a 6×6 matrix by Gauss-Jordan elimination with partial pivoting.
pub fn invert6(m: &[[f64; 6]; 6]) -> Option<[[f64; 6]; 6]> {
    let mut a = *m;
    let mut inv = [[0.0f64; 6]; 6];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..6 {
        let mut pivot_row = col;
        let mut pivot_val = a[col][col].abs();
        for r in (col + 1)..6 {
            if a[r][col].abs() > pivot_val {
                pivot_val = a[r][col].abs();
                pivot_row = r;
            }
        }
        if pivot_val < 1e-300 {
            return None;
        }
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let p = a[col][col];
        for j in 0..6 {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..6 {
            if r == col {
                continue;
            }
            let f = a[r][col];
            if f == 0.0 {
                continue;
            }
            for j in 0..6 {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// 6×6 matrix-vector product.
pub fn mat6_vec(m: &[[f64; 6]; 6], x: &[f64; 6]) -> [f64; 6] {
    let mut y = [0.0; 6];
    for i in 0..6 {
        let mut s = 0.0;
        for j in 0..6 {
            s += m[i][j] * x[j];
        }
        y[i] = s;
    }
    y
}

fn mat6_mul(a: &[[f64; 6]; 6], b: &[[f64; 6]; 6]) -> [[f64; 6]; 6] {
    let mut c = [[0.0; 6]; 6];
    for i in 0..6 {
        for k in 0..6 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..6 {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

/// Matrix exponential of a 6×6 matrix by scaling and squaring with a
/// Taylor series, truncated when the term norm falls below 1e-20 relative.
pub fn expm6(m: &[[f64; 6]; 6]) -> [[f64; 6]; 6] {
    let mut norm = 0.0f64;
    for row in m.iter() {
        let row_sum: f64 = row.iter().map(|v| v.abs()).sum();
        norm = norm.max(row_sum);
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 1.0 / f64::powi(2.0, squarings as i32);
    let mut a = *m;
    for row in a.iter_mut() {
        for v in row.iter_mut() {
            *v *= scale;
        }
    }
    let mut result = [[0.0f64; 6]; 6];
    for (i, row) in result.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut term = result;
    for k in 1..=40u32 {
        term = mat6_mul(&term, &a);
        let inv_k = 1.0 / k as f64;
        let mut term_norm = 0.0f64;
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v *= inv_k;
            }
        }
        for (i, row) in term.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                result[i][j] += v;
                term_norm = term_norm.max(v.abs());
            }
        }
        if term_norm <= 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = mat6_mul(&result, &result);
    }
    result
}
