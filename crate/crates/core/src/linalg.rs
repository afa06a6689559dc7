//! Small dense linear algebra: Householder QR with column pivoting and the
//! minimum-norm least-squares solve built on it.
//!
//! Matrices here are tiny (a few dozen rows at most), so everything is a
//! straightforward row-major `Vec<f64>`.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Householder QR with column pivoting, `A P = Q R`.
///
/// The reflectors are kept in compact form below the diagonal of `qr`;
/// `tau` holds their scalings.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    qr: Matrix,
    tau: Vec<f64>,
    perm: Vec<usize>,
    rank: usize,
}

impl PivotedQr {
    /// Factorizes `a`; columns whose remaining norm drops below
    /// `rel_tol * |R[0,0]|` are treated as numerically dependent.
    pub fn new(a: &Matrix, rel_tol: f64) -> Self {
        let (m, n) = (a.rows, a.cols);
        let mut qr = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let steps = m.min(n);
        let mut tau = vec![0.0; steps];
        let mut col_norms: Vec<f64> = (0..n)
            .map(|j| (0..m).map(|i| qr.get(i, j) * qr.get(i, j)).sum())
            .collect();
        let mut rank = 0;
        let mut lead = 0.0;

        for k in 0..steps {
            // pivot: largest remaining column norm
            let (p, _) = col_norms[k..]
                .iter()
                .enumerate()
                .fold(
                    (k, -1.0),
                    |best, (off, &v)| {
                        if v > best.1 {
                            (k + off, v)
                        } else {
                            best
                        }
                    },
                );
            if p != k {
                for i in 0..m {
                    let t = qr.get(i, k);
                    qr.set(i, k, qr.get(i, p));
                    qr.set(i, p, t);
                }
                col_norms.swap(k, p);
                perm.swap(k, p);
            }

            let alpha = libm::sqrt((k..m).map(|i| qr.get(i, k) * qr.get(i, k)).sum::<f64>());
            if k == 0 {
                lead = alpha;
            }
            if alpha <= rel_tol * lead || alpha == 0.0 {
                break;
            }
            rank += 1;

            let x0 = qr.get(k, k);
            let beta = if x0 >= 0.0 { -alpha } else { alpha };
            let v0 = x0 - beta;
            for i in k + 1..m {
                qr.set(i, k, qr.get(i, k) / v0);
            }
            tau[k] = (beta - x0) / beta;
            qr.set(k, k, beta);

            for j in k + 1..n {
                let mut s = qr.get(k, j);
                for i in k + 1..m {
                    s += qr.get(i, k) * qr.get(i, j);
                }
                s *= tau[k];
                qr.set(k, j, qr.get(k, j) - s);
                for i in k + 1..m {
                    qr.set(i, j, qr.get(i, j) - s * qr.get(i, k));
                }
                // recompute rather than downdate; matrices are tiny
                col_norms[j] = (k + 1..m).map(|i| qr.get(i, j) * qr.get(i, j)).sum();
            }
        }

        Self {
            qr,
            tau,
            perm,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Applies `Q^T` to `b` in place.
    pub fn apply_qt(&self, b: &mut [f64]) {
        let m = self.qr.rows;
        for k in 0..self.rank {
            let mut s = b[k];
            for i in k + 1..m {
                s += self.qr.get(i, k) * b[i];
            }
            s *= self.tau[k];
            b[k] -= s;
            for i in k + 1..m {
                b[i] -= s * self.qr.get(i, k);
            }
        }
    }

    /// Applies `Q` to `b` in place.
    pub fn apply_q(&self, b: &mut [f64]) {
        let m = self.qr.rows;
        for k in (0..self.rank).rev() {
            let mut s = b[k];
            for i in k + 1..m {
                s += self.qr.get(i, k) * b[i];
            }
            s *= self.tau[k];
            b[k] -= s;
            for i in k + 1..m {
                b[i] -= s * self.qr.get(i, k);
            }
        }
    }

    /// Leading `rank x cols` block of `R`, columns in pivoted order.
    fn r_block(&self) -> Matrix {
        let mut r = Matrix::zeros(self.rank, self.qr.cols);
        for i in 0..self.rank {
            for j in i..self.qr.cols {
                r.set(i, j, self.qr.get(i, j));
            }
        }
        r
    }
}

/// Minimum-norm least-squares solution of `A x = b`.
///
/// Uses a complete orthogonal decomposition: pivoted QR of `A^T` gives an
/// orthonormal basis of the row space, and a second QR on the resulting full
/// column rank system solves the reduced problem. Returns the solution and
/// the numerical rank.
pub fn lstsq_min_norm(a: &Matrix, b: &[f64], rel_tol: f64) -> (Vec<f64>, usize) {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    // A^T P = Q R  =>  A = P R^T Q^T
    let qr = PivotedQr::new(&a.transpose(), rel_tol);
    let r = qr.rank();
    let mut x = vec![0.0; n];
    if r == 0 {
        return (x, 0);
    }
    // permuted right-hand side: P^T b
    let pb: Vec<f64> = qr.perm.iter().map(|&i| b[i]).collect();
    // solve min || R^T w - P^T b || where R^T is (rows(A) x r), full column rank
    let rt = qr.r_block().transpose();
    let inner = PivotedQr::new(&rt, 0.0);
    let mut c = pb;
    inner.apply_qt(&mut c);
    // back substitution on the r x r upper triangle (with inner pivoting)
    let mut w_perm = vec![0.0; r];
    for i in (0..r).rev() {
        let mut s = c[i];
        for j in i + 1..r {
            s -= inner.qr.get(i, j) * w_perm[j];
        }
        w_perm[i] = s / inner.qr.get(i, i);
    }
    let mut w = vec![0.0; r];
    for (k, &p) in inner.perm.iter().enumerate() {
        w[p] = w_perm[k];
    }
    // x = Q [w; 0]
    x[..r].copy_from_slice(&w);
    qr.apply_q(&mut x);
    (x, r)
}

/// Numerical rank via pivoted QR.
pub fn rank(a: &Matrix, rel_tol: f64) -> usize {
    PivotedQr::new(a, rel_tol).rank()
}
