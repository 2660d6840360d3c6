//! The N x MN observation matrix.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use nalgebra::{DMatrix, DMatrixView};
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::codes::FrequencyCodes;
use crate::params::{DopplerMode, RadarParams};
use crate::{Error, Result};

/// Observation matrix `Psi = [Psi_0, ..., Psi_{N-1}]`.
///
/// Column `q*M + p` is the unit-norm response of a scatterer in range cell `p`
/// and velocity cell `q`:
/// `(1/sqrt N) exp(j 2 pi p C_n / M + j 2 pi q xi_n n / N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMatrix {
    entries: DMatrix<Complex64>,
    params: RadarParams,
    codes: FrequencyCodes,
    mode: DopplerMode,
}

/// Builds the observation matrix for `codes` under the given Doppler model.
pub fn build_observation_matrix(
    params: &RadarParams,
    codes: &FrequencyCodes,
    mode: DopplerMode,
) -> Result<ObservationMatrix> {
    params.validate()?;
    codes.check_against(params)?;
    let excess: Vec<f64> = codes.codes().iter().map(|&c| mode.doppler_excess(params, c)).collect();
    Ok(ObservationMatrix::assemble(params, codes, &excess, mode))
}

impl ObservationMatrix {
    /// Builds the matrix from explicit per-pulse Doppler scales `xi_n`.
    ///
    /// With every `xi_n == 1.0` the result is bit-identical to the
    /// [`DopplerMode::Simplified`] matrix. Any other input is labelled
    /// [`DopplerMode::Exact`].
    pub fn with_doppler_scales(params: &RadarParams, codes: &FrequencyCodes, xi: &[f64]) -> Result<Self> {
        params.validate()?;
        codes.check_against(params)?;
        if xi.len() != params.n_pulses {
            return Err(Error::DimensionMismatch { expected: params.n_pulses, actual: xi.len() });
        }
        let excess: Vec<f64> = xi.iter().map(|&x| x - 1.0).collect();
        let mode = if excess.iter().all(|&e| e == 0.0) { DopplerMode::Simplified } else { DopplerMode::Exact };
        Ok(Self::assemble(params, codes, &excess, mode))
    }

    fn assemble(params: &RadarParams, codes: &FrequencyCodes, excess: &[f64], mode: DopplerMode) -> Self {
        let n = params.n_pulses;
        let m = params.n_freqs;
        let scale = 1.0 / (n as f64).sqrt();
        let c = codes.codes();
        // Integer parts of the phase are reduced exactly before going to floats.
        let entries = DMatrix::from_fn(n, m * n, |row, col| {
            let (q, p) = (col / m, col % m);
            let range_turns = ((p * c[row]) % m) as f64 / m as f64;
            let doppler_turns = ((q * row) % n) as f64 / n as f64;
            let extra = (q * row) as f64 * excess[row] / n as f64;
            Complex64::from_polar(scale, TAU * (range_turns + doppler_turns + extra))
        });
        Self { entries, params: *params, codes: codes.clone(), mode }
    }

    pub fn params(&self) -> &RadarParams {
        &self.params
    }

    pub fn codes(&self) -> &FrequencyCodes {
        &self.codes
    }

    pub fn mode(&self) -> DopplerMode {
        self.mode
    }

    pub fn n_rows(&self) -> usize {
        self.params.n_pulses
    }

    pub fn n_cols(&self) -> usize {
        self.params.grid_size()
    }

    pub fn block_size(&self) -> usize {
        self.params.n_freqs
    }

    pub fn n_blocks(&self) -> usize {
        self.params.n_pulses
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Column `j` as a contiguous slice.
    pub fn column(&self, j: usize) -> &[Complex64] {
        let n = self.n_rows();
        &self.entries.as_slice()[j * n..(j + 1) * n]
    }

    /// Block `Psi_q`, the N x M slice of columns `q*M .. q*M + M`.
    pub fn block(&self, q: usize) -> Result<DMatrixView<'_, Complex64>> {
        if q >= self.n_blocks() {
            return Err(Error::IndexOutOfRange { index: q, bound: self.n_blocks() });
        }
        let m = self.block_size();
        Ok(self.entries.columns(q * m, m))
    }

    /// Sub-matrix made of the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> DMatrix<Complex64> {
        let n = self.n_rows();
        DMatrix::from_fn(n, cols.len(), |i, k| self.column(cols[k])[i])
    }

    /// `Psi x`. Zero entries of `x` are skipped.
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.n_cols() {
            return Err(Error::DimensionMismatch { expected: self.n_cols(), actual: x.len() });
        }
        let mut y = alloc::vec![Complex64::new(0.0, 0.0); self.n_rows()];
        for (j, &xj) in x.iter().enumerate() {
            if xj.re == 0.0 && xj.im == 0.0 {
                continue;
            }
            for (yi, &a) in y.iter_mut().zip(self.column(j)) {
                *yi += a * xj;
            }
        }
        Ok(y)
    }

    /// `Psi^H r`.
    pub fn adjoint_apply(&self, r: &[Complex64]) -> Result<Vec<Complex64>> {
        if r.len() != self.n_rows() {
            return Err(Error::DimensionMismatch { expected: self.n_rows(), actual: r.len() });
        }
        Ok((0..self.n_cols()).map(|j| self.column(j).iter().zip(r).map(|(a, &b)| a.conj() * b).sum()).collect())
    }
}
