//! A small dense simplex solver and the one problem this crate needs from
//! it: finding the most interior point of a box along an affine subspace.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;

const EPS: f64 = 1e-12;

/// Solves `max c^T y` subject to `A y <= b`, `y >= 0`, with `b >= 0` so the
/// slack basis is feasible. Bland's rule keeps degenerate pivots from
/// cycling. Returns `None` when the objective is unbounded.
pub fn simplex_max(a: &Matrix, b: &[f64], c: &[f64]) -> Option<(Vec<f64>, f64)> {
    let (rows, vars) = (a.rows(), a.cols());
    assert_eq!(b.len(), rows);
    assert_eq!(c.len(), vars);
    assert!(b.iter().all(|&v| v >= 0.0), "infeasible starting basis");

    let width = vars + rows + 1;
    let mut t = Matrix::zeros(rows + 1, width);
    for i in 0..rows {
        for j in 0..vars {
            t.set(i, j, a.get(i, j));
        }
        t.set(i, vars + i, 1.0);
        t.set(i, width - 1, b[i]);
    }
    for j in 0..vars {
        t.set(rows, j, -c[j]);
    }
    let mut basis: Vec<usize> = (vars..vars + rows).collect();

    // entering: lowest index with negative reduced cost
    while let Some(enter) = (0..width - 1).find(|&j| t.get(rows, j) < -EPS) {
        // leaving: min ratio, ties broken by lowest basis index
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let coef = t.get(i, enter);
            if coef > EPS {
                let ratio = t.get(i, width - 1) / coef;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - EPS || (ratio <= lr + EPS && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        let (pr, _) = leave?;
        pivot(&mut t, pr, enter);
        basis[pr] = enter;
    }

    let mut y = vec![0.0; vars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < vars {
            y[bv] = t.get(i, width - 1);
        }
    }
    Some((y, t.get(rows, width - 1)))
}

fn pivot(t: &mut Matrix, pr: usize, pc: usize) {
    let (rows, cols) = (t.rows(), t.cols());
    let p = t.get(pr, pc);
    for j in 0..cols {
        t.set(pr, j, t.get(pr, j) / p);
    }
    for i in 0..rows {
        if i == pr {
            continue;
        }
        let f = t.get(i, pc);
        if f != 0.0 {
            for j in 0..cols {
                t.set(i, j, t.get(i, j) - f * t.get(pr, j));
            }
        }
    }
}

/// Most interior point of the box `[lo, hi]` on the affine set
/// `{ base + N z }`, where `N` is `basis` (one column per direction).
///
/// Maximizes the minimum slack `s` with `lo_i + s <= x_i <= hi_i - s` and
/// returns `(x, s)`. A non-positive `s` means the open box misses the set.
/// All bounds must be finite.
pub fn max_min_slack(base: &[f64], basis: &Matrix, lo: &[f64], hi: &[f64]) -> (Vec<f64>, f64) {
    let m = base.len();
    assert_eq!(basis.rows(), m);
    assert_eq!(lo.len(), m);
    assert_eq!(hi.len(), m);
    let dirs = basis.cols();

    // shift s = t - shift so that y = 0 is feasible
    let mut shift: f64 = 0.0;
    for i in 0..m {
        shift = shift.max(lo[i] - base[i]).max(base[i] - hi[i]);
    }
    shift += 1.0;

    // columns: z+ (dirs), z- (dirs), t
    let vars = 2 * dirs + 1;
    let mut a = Matrix::zeros(2 * m, vars);
    let mut b = vec![0.0; 2 * m];
    for i in 0..m {
        for k in 0..dirs {
            let nk = basis.get(i, k);
            // lower side: -N z + s <= base - lo
            a.set(2 * i, k, -nk);
            a.set(2 * i, dirs + k, nk);
            // upper side: N z + s <= hi - base
            a.set(2 * i + 1, k, nk);
            a.set(2 * i + 1, dirs + k, -nk);
        }
        a.set(2 * i, vars - 1, 1.0);
        a.set(2 * i + 1, vars - 1, 1.0);
        b[2 * i] = (base[i] - lo[i] + shift).max(0.0);
        b[2 * i + 1] = (hi[i] - base[i] + shift).max(0.0);
    }
    let mut c = vec![0.0; vars];
    c[vars - 1] = 1.0;

    let (y, _) = simplex_max(&a, &b, &c).expect("slack objective is bounded by the box");
    let mut x = base.to_vec();
    for k in 0..dirs {
        let zk = y[k] - y[dirs + k];
        if zk != 0.0 {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += zk * basis.get(i, k);
            }
        }
    }
    let slack = (0..m)
        .map(|i| (x[i] - lo[i]).min(hi[i] - x[i]))
        .fold(f64::INFINITY, f64::min);
    (x, if m == 0 { f64::INFINITY } else { slack })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_lp() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  -> (2, 6), 36
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]]);
        let (y, val) = simplex_max(&a, &[4.0, 12.0, 18.0], &[3.0, 5.0]).unwrap();
        assert!((val - 36.0).abs() < 1e-12);
        assert!((y[0] - 2.0).abs() < 1e-12 && (y[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_detected() {
        let a = Matrix::from_rows(&[vec![1.0, -1.0]]);
        assert!(simplex_max(&a, &[1.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn slack_centres_a_line_in_a_square() {
        // points (t, t) in [0, 1]^2 -> centre (0.5, 0.5), slack 0.5
        let basis = Matrix::from_rows(&[vec![1.0], vec![1.0]]);
        let (x, s) = max_min_slack(&[-3.0, -3.0], &basis, &[0.0, 0.0], &[1.0, 1.0]);
        assert!((s - 0.5).abs() < 1e-12);
        assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn slack_negative_when_box_is_missed() {
        // (t, t + 3) can never be inside [0, 1]^2
        let basis = Matrix::from_rows(&[vec![1.0], vec![1.0]]);
        let (_, s) = max_min_slack(&[0.0, 3.0], &basis, &[0.0, 0.0], &[1.0, 1.0]);
        assert!(s <= 0.0);
    }

    #[test]
    fn no_directions_reports_slack_of_base() {
        let basis = Matrix::zeros(2, 0);
        let (x, s) = max_min_slack(&[0.25, 0.5], &basis, &[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!(x, vec![0.25, 0.5]);
        assert!((s - 0.25).abs() < 1e-15);
    }
}
