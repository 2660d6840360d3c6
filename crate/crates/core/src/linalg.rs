//! Dense complex helpers shared by the spectral and recovery modules.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Relative pivot size below which a column set counts as rank deficient.
pub(crate) const RANK_TOL: f64 = 1e-10;

/// Largest singular value.
pub(crate) fn spectral_norm(a: &DMatrix<Complex64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Largest eigenvalue of a Hermitian matrix.
pub(crate) fn max_hermitian_eigenvalue(h: DMatrix<Complex64>) -> f64 {
    if h.is_empty() {
        return 0.0;
    }
    h.symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) struct LeastSquares {
    pub coef: Vec<Complex64>,
    pub rank_deficient: bool,
}

/// Least-squares solution through a thin QR; `None` when the columns are
/// (numerically) dependent.
pub(crate) fn qr_least_squares(a: &DMatrix<Complex64>, b: &[Complex64]) -> Option<Vec<Complex64>> {
    let (rows, cols) = a.shape();
    if cols == 0 {
        return Some(Vec::new());
    }
    if cols > rows {
        return None;
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let diag_max = (0..cols).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
    if diag_max == 0.0 || (0..cols).any(|i| r[(i, i)].norm() <= RANK_TOL * diag_max) {
        return None;
    }
    let rhs = qr.q().adjoint() * DVector::from_column_slice(b);
    r.solve_upper_triangular(&rhs).map(|x| x.iter().copied().collect())
}

/// Minimum-norm least squares: QR when the columns are independent, SVD
/// pseudo-inverse otherwise.
pub(crate) fn min_norm_least_squares(a: &DMatrix<Complex64>, b: &[Complex64]) -> LeastSquares {
    if let Some(coef) = qr_least_squares(a, b) {
        return LeastSquares { coef, rank_deficient: false };
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let coef = svd
        .solve(&DVector::from_column_slice(b), RANK_TOL * smax.max(f64::MIN_POSITIVE))
        .map(|x| x.iter().copied().collect())
        .unwrap_or_else(|_| alloc::vec![Complex64::new(0.0, 0.0); a.ncols()]);
    LeastSquares { coef, rank_deficient: true }
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    num_traits::Float::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr_solves_consistent_system() {
        let a = DMatrix::from_fn(5, 2, |i, j| Complex64::new((i + j) as f64, (i * i * j) as f64 - 1.0));
        let x = [Complex64::new(1.0, -2.0), Complex64::new(0.5, 0.25)];
        let b: Vec<Complex64> = (0..5).map(|i| a[(i, 0)] * x[0] + a[(i, 1)] * x[1]).collect();
        let got = qr_least_squares(&a, &b).unwrap();
        assert!((got[0] - x[0]).norm() < 1e-12 && (got[1] - x[1]).norm() < 1e-12);
    }

    #[test]
    fn dependent_columns_fall_back_to_pseudo_inverse() {
        let a = DMatrix::from_fn(3, 2, |i, _| Complex64::new(i as f64 + 1.0, 0.0));
        let b = [Complex64::new(2.0, 0.0), Complex64::new(4.0, 0.0), Complex64::new(6.0, 0.0)];
        assert!(qr_least_squares(&a, &b).is_none());
        let ls = min_norm_least_squares(&a, &b);
        assert!(ls.rank_deficient);
        // minimum-norm split of the coefficient 2 across two identical columns
        assert!((ls.coef[0] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        assert!((ls.coef[1] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }
}
