//! Dense symmetric eigendecomposition through nalgebra.
//!
//! nalgebra's implicit QR only deflates an off-diagonal entry relative to its
//! diagonal neighbours, so a matrix with zero diagonal can keep tiny
//! off-diagonal remnants forever and come back as NaN. The matrix is shifted
//! by its infinity norm first; eigenvectors are unaffected.

use nalgebra::{DMatrix, Dyn, SymmetricEigen};

pub fn symmetric_eigen(m: DMatrix<f64>) -> SymmetricEigen<f64, Dyn> {
    let n = m.nrows();
    let shift = 1.0 + m.row_iter().map(|r| r.abs().sum()).fold(0.0, f64::max);
    let mut eig = (m + DMatrix::identity(n, n) * shift).symmetric_eigen();
    eig.eigenvalues.iter_mut().for_each(|x| *x -= shift);
    eig
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = symmetric_eigen(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_diagonal_with_sparse_couplings() {
        let mut m = DMatrix::<f64>::zeros(40, 40);
        for (i, j, x) in [(3, 14, 0.4678825478115673), (4, 15, -0.21385992835175519)] {
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
        let ev = eigenvalues(m);
        assert!(ev.iter().all(|x| x.is_finite()));
        assert!((ev[0] + 0.4678825478115673).abs() < 1e-14);
        assert!((ev[39] - 0.4678825478115673).abs() < 1e-14);
    }
}
