use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use super::proximal::{block_soft_threshold, soft_threshold};
use super::{threshold_support, RecoveryResult, SolverConfig};
use crate::linalg;
use crate::matrix::ObservationMatrix;
use crate::{Error, Result};

/// Noiseless basis pursuit `min ||x||_1 s.t. Psi x = y`, or its block form
/// `min sum_q ||x_q||_2` when `blockwise`, by ADMM on the split `x = z` with
/// `x` constrained to the affine set. Stops once
/// `||Psi z - y|| / ||y||` and `||x - z|| / max(1, ||z||)` both fall below the
/// tolerance. Reaching the iteration cap returns the last iterate with
/// `converged = false`.
pub fn basis_pursuit_solve(
    matrix: &ObservationMatrix,
    y: &[Complex64],
    config: &SolverConfig,
    blockwise: bool,
) -> Result<RecoveryResult> {
    config.validate()?;
    if y.len() != matrix.n_rows() {
        return Err(Error::DimensionMismatch { expected: matrix.n_rows(), actual: y.len() });
    }
    let a = matrix.entries();
    let gram = a * a.adjoint();
    let chol = gram.cholesky().ok_or(Error::RankDeficient { iteration: 0 })?;
    let project = |v: &[Complex64]| -> Result<Vec<Complex64>> {
        let pv = matrix.apply(v)?;
        let gap = DVector::from_iterator(pv.len(), pv.iter().zip(y).map(|(p, b)| p - b));
        let w = chol.solve(&gap);
        let corr = matrix.adjoint_apply(w.as_slice())?;
        Ok(v.iter().zip(corr).map(|(a, b)| a - b).collect())
    };

    let n_cols = matrix.n_cols();
    let zero = Complex64::new(0.0, 0.0);
    let tau = 1.0 / config.penalty;
    let y_norm = linalg::norm(y).max(f64::MIN_POSITIVE);
    let mut z = alloc::vec![zero; n_cols];
    let mut u = alloc::vec![zero; n_cols];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let zu: Vec<Complex64> = z.iter().zip(&u).map(|(a, b)| a - b).collect();
        let x = project(&zu)?;
        let v: Vec<Complex64> = x.iter().zip(&u).map(|(a, b)| a + b).collect();
        z = if blockwise { block_soft_threshold(&v, matrix.block_size(), tau) } else { soft_threshold(&v, tau) };
        let mut consensus = 0.0;
        for i in 0..n_cols {
            let d = x[i] - z[i];
            u[i] += d;
            consensus += d.norm_sqr();
        }
        if !consensus.is_finite() {
            return Err(Error::Diverged { iteration: iterations });
        }
        let fit = matrix.apply(&z)?;
        let infeasibility = linalg::norm(&fit.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>()) / y_norm;
        let consensus = num_traits::Float::sqrt(consensus) / linalg::norm(&z).max(1.0);
        if infeasibility < config.tolerance && consensus < config.tolerance {
            converged = true;
            break;
        }
    }
    let support = threshold_support(&z, config.support_threshold);
    RecoveryResult::assemble(matrix, y, z, support, iterations, converged)
}
