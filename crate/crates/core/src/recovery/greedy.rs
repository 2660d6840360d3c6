use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{RecoveryResult, DEFAULT_SUPPORT_THRESHOLD};
use crate::linalg;
use crate::matrix::ObservationMatrix;
use crate::{Error, Result};

/// Residual norm, relative to `||y||`, at which the pursuits stop early.
const RESIDUAL_FLOOR: f64 = 1e-12;

fn check_len(matrix: &ObservationMatrix, y: &[Complex64]) -> Result<()> {
    if y.len() != matrix.n_rows() {
        return Err(Error::DimensionMismatch { expected: matrix.n_rows(), actual: y.len() });
    }
    Ok(())
}

fn residual(a: &nalgebra::DMatrix<Complex64>, coef: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    let fit = a * nalgebra::DVector::from_column_slice(coef);
    y.iter().zip(fit.iter()).map(|(u, v)| u - v).collect()
}

/// Orthogonal matching pursuit with exactly `sparsity` column selections
/// (fewer if the residual vanishes). Ties pick the lowest column index.
pub fn omp(matrix: &ObservationMatrix, y: &[Complex64], sparsity: usize) -> Result<RecoveryResult> {
    check_len(matrix, y)?;
    if sparsity == 0 || sparsity > matrix.n_rows() {
        return Err(Error::InvalidSparsity { sparsity, max: matrix.n_rows() });
    }
    let floor = RESIDUAL_FLOOR * linalg::norm(y);
    let mut r = y.to_vec();
    let mut selected: Vec<usize> = Vec::with_capacity(sparsity);
    let mut coef: Vec<Complex64> = Vec::new();
    for it in 0..sparsity {
        if linalg::norm(&r) <= floor {
            break;
        }
        let corr = matrix.adjoint_apply(&r)?;
        let mut best: Option<(usize, f64)> = None;
        for (j, c) in corr.iter().enumerate() {
            if selected.contains(&j) {
                continue;
            }
            let s = c.norm_sqr();
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((j, s));
            }
        }
        let Some((j, _)) = best else { break };
        selected.push(j);
        let a = matrix.select_columns(&selected);
        coef = linalg::qr_least_squares(&a, y).ok_or(Error::RankDeficient { iteration: it + 1 })?;
        r = residual(&a, &coef, y);
    }
    let mut estimate = alloc::vec![Complex64::new(0.0, 0.0); matrix.n_cols()];
    for (&j, &v) in selected.iter().zip(&coef) {
        estimate[j] = v;
    }
    let support: BTreeSet<usize> = selected.iter().copied().collect();
    let iterations = selected.len();
    let mut out = RecoveryResult::assemble(matrix, y, estimate, support, iterations, true)?;
    out.selected = selected;
    Ok(out)
}

/// Block orthogonal matching pursuit selecting `n_blocks` velocity cells by
/// the energy of the block correlation `||Psi_q^H r||_2`. The support holds
/// the entries of the chosen blocks whose refitted magnitude exceeds
/// [`DEFAULT_SUPPORT_THRESHOLD`].
pub fn block_omp(matrix: &ObservationMatrix, y: &[Complex64], n_blocks: usize) -> Result<RecoveryResult> {
    check_len(matrix, y)?;
    let m = matrix.block_size();
    if n_blocks == 0 || n_blocks > matrix.n_blocks() {
        return Err(Error::InvalidSparsity { sparsity: n_blocks, max: matrix.n_blocks() });
    }
    let floor = RESIDUAL_FLOOR * linalg::norm(y);
    let mut r = y.to_vec();
    let mut selected: Vec<usize> = Vec::with_capacity(n_blocks);
    let mut cols: Vec<usize> = Vec::new();
    let mut coef: Vec<Complex64> = Vec::new();
    for it in 0..n_blocks {
        if linalg::norm(&r) <= floor {
            break;
        }
        let corr = matrix.adjoint_apply(&r)?;
        let mut best: Option<(usize, f64)> = None;
        for (q, chunk) in corr.chunks(m).enumerate() {
            if selected.contains(&q) {
                continue;
            }
            let s: f64 = chunk.iter().map(|c| c.norm_sqr()).sum();
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((q, s));
            }
        }
        let Some((q, _)) = best else { break };
        selected.push(q);
        cols.extend(q * m..(q + 1) * m);
        let a = matrix.select_columns(&cols);
        coef = linalg::qr_least_squares(&a, y).ok_or(Error::RankDeficient { iteration: it + 1 })?;
        r = residual(&a, &coef, y);
    }
    let mut estimate = alloc::vec![Complex64::new(0.0, 0.0); matrix.n_cols()];
    for (&j, &v) in cols.iter().zip(&coef) {
        estimate[j] = v;
    }
    let support = super::threshold_support(&estimate, DEFAULT_SUPPORT_THRESHOLD);
    let iterations = selected.len();
    let mut out = RecoveryResult::assemble(matrix, y, estimate, support, iterations, true)?;
    out.block_support = selected.iter().copied().collect();
    out.selected = selected;
    Ok(out)
}


#[cfg(test)]
mod block_argmax {
    use super::*;
    use crate::codes::draw_codes;
    use crate::matrix::build_observation_matrix;
    use crate::params::{DopplerMode, RadarParams};
    use crate::scene::{scene_to_vector, synthesize_scene};

    #[test]
    fn first_block_pick_is_the_block_argmax() {
        let p = RadarParams::x_band(16, 4).unwrap();
        let matrix = build_observation_matrix(&p, &draw_codes(&p, 2), DopplerMode::Exact).unwrap();
        for trial in 0..20u64 {
            let scene = synthesize_scene(&p, 1, 3, trial).unwrap();
            let x = scene_to_vector(&scene, &p).unwrap();
            let y = matrix.apply(x.values()).unwrap();
            let oracle = (0..16)
                .map(|q| {
                    let block = matrix.block(q).unwrap();
                    let e: f64 = (0..4)
                        .map(|k| {
                            block.column(k).iter().zip(&y).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
                        })
                        .sum();
                    (q, e)
                })
                .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            let r = block_omp(&matrix, &y, 1).unwrap();
            assert_eq!(r.selected, [oracle.0]);
            assert_eq!(r.block_support, x.block_support());
        }
    }
}
