//! Lowest eigenpair of a real symmetric tridiagonal matrix.
//!
//! The eigenvalue comes from Sturm-count bisection and the eigenvector from
//! inverse iteration with a pivoted tridiagonal solve. Both are O(n), so the
//! Lanczos driver can afford to call this after every step.

/// Number of eigenvalues strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves `A x = b` in place for tridiagonal `A` (sub `dl`, main `d`, super
/// `du`) with partial pivoting. Exactly zero pivots are replaced by `tiny`.
fn solve_pivoted(dl: &mut [f64], d: &mut [f64], du: &mut [f64], b: &mut [f64], tiny: f64) {
    let n = d.len();
    if n == 1 {
        if d[0] == 0.0 {
            d[0] = tiny;
        }
        b[0] /= d[0];
        return;
    }
    // dl[i] is reused for the second superdiagonal fill-in after a row swap
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            let bt = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bt - fact * b[i + 1];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i];
    }
}

/// Smallest eigenvalue and a unit eigenvector of the tridiagonal matrix with
/// main diagonal `diag` and off-diagonal `off` (`off.len() == diag.len() - 1`).
pub fn lowest_eigenpair(diag: &[f64], off: &[f64]) -> (f64, Vec<f64>) {
    let n = diag.len();
    assert!(n >= 1 && off.len() + 1 == n);
    if n == 1 {
        return (diag[0], vec![1.0]);
    }

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let max_off2 = off.iter().map(|b| b * b).fold(0.0, f64::max);
    let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * max_off2);
    let mut lo = lo - 2.0 * f64::EPSILON * scale;
    let mut hi = hi + 2.0 * f64::EPSILON * scale;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale {
            break;
        }
        if sturm_count(diag, off, mid, pivmin) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta = 0.5 * (lo + hi);

    let tiny = f64::EPSILON * scale;
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..3 {
        let mut d: Vec<f64> = diag.iter().map(|a| a - theta).collect();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        solve_pivoted(&mut dl, &mut d, &mut du, &mut x, tiny);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    (theta, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn dense_lowest(diag: &[f64], off: &[f64]) -> f64 {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = off[i];
                m[(i + 1, i)] = off[i];
            }
        }
        crate::solver::dense::eigenvalues(m)[0]
    }

    fn residual(diag: &[f64], off: &[f64], theta: f64, x: &[f64]) -> f64 {
        let n = diag.len();
        (0..n)
            .map(|i| {
                let mut y = (diag[i] - theta) * x[i];
                if i > 0 {
                    y += off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += off[i] * x[i + 1];
                }
                y * y
            })
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn two_by_two() {
        let (theta, x) = lowest_eigenpair(&[0.0, 0.0], &[1.0]);
        assert!((theta + 1.0).abs() < 1e-15);
        assert!((x[0] + x[1]).abs() < 1e-12);
    }

    #[test]
    fn split_matrix() {
        // zero coupling: two independent blocks, the lower lives in the second
        let diag = [3.0, 1.0, -2.0, 0.5];
        let off = [0.5, 0.0, 1.0];
        let (theta, x) = lowest_eigenpair(&diag, &off);
        assert!((theta - dense_lowest(&diag, &off)).abs() < 1e-13);
        assert!(residual(&diag, &off, theta, &x) < 1e-12);
    }

    #[test]
    fn degenerate_diagonal() {
        let diag = [1.0, 1.0, 1.0];
        let (theta, x) = lowest_eigenpair(&diag, &[0.0, 0.0]);
        assert!((theta - 1.0).abs() < 1e-14);
        assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn matches_dense(
            diag in proptest::collection::vec(-5.0f64..5.0, 1..40),
            seed in proptest::collection::vec(-2.0f64..2.0, 40),
        ) {
            let off: Vec<f64> = seed[..diag.len() - 1].to_vec();
            let (theta, x) = lowest_eigenpair(&diag, &off);
            let oracle = dense_lowest(&diag, &off);
            proptest::prop_assert!((theta - oracle).abs() < 1e-12 * oracle.abs().max(1.0));
            proptest::prop_assert!(residual(&diag, &off, theta, &x) < 1e-10);
        }
    }
}
