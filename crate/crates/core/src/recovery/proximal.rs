use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{threshold_support, RecoveryResult, SolverConfig};
use crate::matrix::ObservationMatrix;
use crate::spectral;
use crate::{Error, Result};

/// Fraction of the largest correlation used as the default weight.
const DEFAULT_LAMBDA_FRACTION: f64 = 0.1;

fn shrink_factor(magnitude: f64, tau: f64) -> f64 {
    if magnitude > tau {
        1.0 - tau / magnitude
    } else {
        0.0
    }
}

/// Entrywise complex soft-threshold `z * max(0, 1 - tau/|z|)`.
pub fn soft_threshold(z: &[Complex64], tau: f64) -> Vec<Complex64> {
    z.iter().map(|&v| v * shrink_factor(v.norm_sqr().sqrt(), tau)).collect()
}

/// Blockwise soft-threshold `z_q * max(0, 1 - tau/||z_q||_2)`.
pub fn block_soft_threshold(z: &[Complex64], block_size: usize, tau: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(z.len());
    for chunk in z.chunks(block_size.max(1)) {
        let s = shrink_factor(chunk.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt(), tau);
        out.extend(chunk.iter().map(|&v| v * s));
    }
    out
}

fn penalty(x: &[Complex64], group: usize) -> f64 {
    x.chunks(group).map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()).sum()
}

fn objective(y: &[Complex64], fitted: &[Complex64], x: &[Complex64], group: usize, lambda: f64) -> f64 {
    let misfit: f64 = y.iter().zip(fitted).map(|(a, b)| (a - b).norm_sqr()).sum();
    0.5 * misfit + lambda * penalty(x, group)
}

/// Least absolute shrinkage: `min 1/2 ||y - Psi x||^2 + lambda ||x||_1`.
pub fn lasso_solve(matrix: &ObservationMatrix, y: &[Complex64], config: &SolverConfig) -> Result<RecoveryResult> {
    accelerated_proximal(matrix, y, config, 1)
}

/// Group shrinkage over velocity blocks:
/// `min 1/2 ||y - Psi x||^2 + lambda sum_q ||x_q||_2`.
pub fn block_lasso_solve(matrix: &ObservationMatrix, y: &[Complex64], config: &SolverConfig) -> Result<RecoveryResult> {
    accelerated_proximal(matrix, y, config, matrix.block_size())
}

fn default_lambda(correlation: &[Complex64], group: usize) -> f64 {
    DEFAULT_LAMBDA_FRACTION
        * correlation.chunks(group).map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()).fold(0.0, f64::max)
}

// Accelerated proximal gradient with a restart whenever the objective rises.
fn accelerated_proximal(
    matrix: &ObservationMatrix,
    y: &[Complex64],
    config: &SolverConfig,
    group: usize,
) -> Result<RecoveryResult> {
    config.validate()?;
    if y.len() != matrix.n_rows() {
        return Err(Error::DimensionMismatch { expected: matrix.n_rows(), actual: y.len() });
    }
    let n_cols = matrix.n_cols();
    let zero = Complex64::new(0.0, 0.0);
    let correlation = matrix.adjoint_apply(y)?;
    let lambda = match config.lambda {
        Some(l) => l,
        None => default_lambda(&correlation, group),
    };
    if lambda == 0.0 {
        // Psi^H y = 0, so x = 0 is optimal for every positive weight.
        return RecoveryResult::assemble(matrix, y, alloc::vec![zero; n_cols], Default::default(), 0, true);
    }
    let lipschitz = config.lipschitz.unwrap_or_else(|| {
        let norm = spectral::spectral_norm(matrix);
        norm * norm
    });
    let step = 1.0 / lipschitz;
    let tau = lambda * step;

    let mut x = alloc::vec![zero; n_cols];
    let mut psi_x = alloc::vec![zero; matrix.n_rows()];
    let mut z = x.clone();
    let mut psi_z = psi_x.clone();
    let mut t: f64 = 1.0;
    let mut f = objective(y, &psi_x, &x, group, lambda);
    let mut restarted = true;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < config.max_iterations {
        iterations += 1;
        let r: Vec<Complex64> = psi_z.iter().zip(y).map(|(a, b)| a - b).collect();
        let grad = matrix.adjoint_apply(&r)?;
        let moved: Vec<Complex64> = z.iter().zip(&grad).map(|(a, g)| a - g * step).collect();
        let cand = block_soft_threshold(&moved, group, tau);
        let psi_cand = matrix.apply(&cand)?;
        let fc = objective(y, &psi_cand, &cand, group, lambda);
        if !fc.is_finite() {
            return Err(Error::Diverged { iteration: iterations });
        }
        if fc > f {
            if restarted {
                // A plain proximal step from x went uphill: rounding level.
                converged = true;
                break;
            }
            t = 1.0;
            z.clone_from(&x);
            psi_z.clone_from(&psi_x);
            restarted = true;
            continue;
        }
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let beta = (t - 1.0) / t_next;
        for i in 0..n_cols {
            z[i] = cand[i] + (cand[i] - x[i]) * beta;
        }
        for i in 0..psi_z.len() {
            psi_z[i] = psi_cand[i] + (psi_cand[i] - psi_x[i]) * beta;
        }
        let decrease = f - fc;
        x = cand;
        psi_x = psi_cand;
        t = t_next;
        restarted = false;
        let scale = f.abs().max(f64::MIN_POSITIVE);
        f = fc;
        if decrease <= config.tolerance * scale {
            converged = true;
            break;
        }
    }
    let support = threshold_support(&x, config.support_threshold);
    RecoveryResult::assemble(matrix, y, x, support, iterations, converged)
}

/// Objective value of the (block) Lasso at `x`; `group` is 1 or M.
#[cfg(test)]
pub(crate) fn lasso_objective(
    matrix: &ObservationMatrix,
    y: &[Complex64],
    x: &[Complex64],
    group: usize,
    lambda: f64,
) -> f64 {
    objective(y, &matrix.apply(x).unwrap(), x, group, lambda)
}
