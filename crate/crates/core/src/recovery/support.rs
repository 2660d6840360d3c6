use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::linalg;
use crate::matrix::ObservationMatrix;
use crate::{Error, Result};

/// Indices of the `count` largest magnitudes; ties go to the lower index.
pub fn extract_support_topk(x: &[Complex64], count: usize) -> BTreeSet<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].norm_sqr().partial_cmp(&x[a].norm_sqr()).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    order.into_iter().take(count).collect()
}

/// Indices whose magnitude exceeds `threshold`.
pub fn threshold_support(x: &[Complex64], threshold: f64) -> BTreeSet<usize> {
    x.iter().enumerate().filter(|(_, v)| v.norm() > threshold).map(|(i, _)| i).collect()
}

/// `[nu]_q = ||x_q||_2` for blocks of length `block_size`.
pub fn velocity_spectrum(x: &[Complex64], block_size: usize) -> Result<Vec<f64>> {
    if block_size == 0 || !x.len().is_multiple_of(block_size) {
        return Err(Error::DimensionMismatch {
            expected: x.len().next_multiple_of(block_size.max(1)),
            actual: x.len(),
        });
    }
    Ok(x.chunks(block_size).map(linalg::norm).collect())
}

/// Reshapes `|x|` into the M x N range-velocity grid: row `p`, column `q`.
pub fn magnitude_grid(x: &[Complex64], block_size: usize) -> Result<Vec<Vec<f64>>> {
    if block_size == 0 || !x.len().is_multiple_of(block_size) {
        return Err(Error::DimensionMismatch {
            expected: x.len().next_multiple_of(block_size.max(1)),
            actual: x.len(),
        });
    }
    let n_blocks = x.len() / block_size;
    Ok((0..block_size).map(|p| (0..n_blocks).map(|q| x[q * block_size + p].norm()).collect()).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Debiased {
    pub estimate: Vec<Complex64>,
    /// The support columns were dependent and a pseudo-inverse was used.
    pub rank_deficient: bool,
}

/// Least-squares refit of `y` on the support columns; zeros elsewhere.
pub fn debias_least_squares(
    matrix: &ObservationMatrix,
    y: &[Complex64],
    support: &BTreeSet<usize>,
) -> Result<Debiased> {
    if y.len() != matrix.n_rows() {
        return Err(Error::DimensionMismatch { expected: matrix.n_rows(), actual: y.len() });
    }
    if let Some(&bad) = support.iter().find(|&&i| i >= matrix.n_cols()) {
        return Err(Error::IndexOutOfRange { index: bad, bound: matrix.n_cols() });
    }
    let cols: Vec<usize> = support.iter().copied().collect();
    let mut estimate = alloc::vec![Complex64::new(0.0, 0.0); matrix.n_cols()];
    if cols.is_empty() {
        return Ok(Debiased { estimate, rank_deficient: false });
    }
    let ls = linalg::min_norm_least_squares(&matrix.select_columns(&cols), y);
    for (&c, v) in cols.iter().zip(ls.coef) {
        estimate[c] = v;
    }
    Ok(Debiased { estimate, rank_deficient: ls.rank_deficient })
}
