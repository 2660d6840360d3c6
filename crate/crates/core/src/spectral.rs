//! Gram-block structure of the observation matrix.
//!
//! Under the simplified Doppler model every Gram block
//! `X_{q1,q2} = Psi_{q1}^H Psi_{q2}` is an M x M circulant matrix that only
//! depends on `dq = q2 - q1 (mod N)`. Its eigenvalues have the closed form
//!
//! ```text
//! lambda_m(dq) = (M / N) * sum_{n : C_n = m} exp(j 2 pi dq n / N)
//! ```
//!
//! and because circulant matrices are normal, the singular values of
//! `X_{q,q} - I` and `X_{q1,q2}` (q1 != q2) are `|lambda_m(0) - 1|` and
//! `|lambda_m(dq)|`. This turns the block coherences into O(N M) sums and pins
//! the spectral norm of `Psi` to `sqrt(M)`.
//!
//! Every closed form here has a numeric counterpart that works on the matrix
//! itself and is the only option under the exact Doppler model.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::codes::FrequencyCodes;
use crate::linalg;
use crate::matrix::ObservationMatrix;
use crate::params::DopplerMode;
use crate::{Error, Result};
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Largest N accepted by the O(N^2) numeric inter-block coherence.
pub const NUMERIC_INTER_BLOCK_LIMIT: usize = 256;

/// `X_{q1,q2} = Psi_{q1}^H Psi_{q2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramBlock {
    pub block: DMatrix<Complex64>,
    pub q1: usize,
    pub q2: usize,
}

impl GramBlock {
    /// `q2 - q1` reduced modulo N.
    pub fn dq(&self, n_pulses: usize) -> usize {
        (self.q2 + n_pulses - self.q1) % n_pulses
    }

    pub fn first_row(&self) -> Vec<Complex64> {
        self.block.row(0).iter().copied().collect()
    }

    /// Largest deviation from the circulant pattern `X[i][k] = X[0][(k - i) mod M]`.
    pub fn circulant_defect(&self) -> f64 {
        let m = self.block.nrows();
        let mut worst = 0.0_f64;
        for i in 0..m {
            for k in 0..m {
                let d = (self.block[(i, k)] - self.block[(0, (k + m - i) % m)]).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Eigenvalues from the DFT of the first row. Only meaningful when the
    /// block is circulant.
    pub fn circulant_eigenvalues(&self) -> Vec<Complex64> {
        circulant_eigenvalues(&self.first_row())
    }
}

/// Eigenvalues of the circulant matrix with first row `c`:
/// `lambda_m = sum_l c_l exp(-j 2 pi m l / M)`.
///
/// The index `m` lines up with the code value in
/// [`block_eigenvalues_closed_form`].
pub fn circulant_eigenvalues(first_row: &[Complex64]) -> Vec<Complex64> {
    let m = first_row.len();
    (0..m)
        .map(|k| {
            first_row
                .iter()
                .enumerate()
                .map(|(l, &c)| c * Complex64::from_polar(1.0, -TAU * ((k * l) % m) as f64 / m as f64))
                .sum()
        })
        .collect()
}

/// Numerically forms `Psi_{q1}^H Psi_{q2}`.
pub fn gram_block(matrix: &ObservationMatrix, q1: usize, q2: usize) -> Result<GramBlock> {
    let a = matrix.block(q1)?;
    let b = matrix.block(q2)?;
    Ok(GramBlock { block: a.adjoint() * b, q1, q2 })
}

/// Eigenvalues and singular values of the (identity-shifted) Gram block at
/// lag `dq`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct BlockSpectrum {
    /// Lag reduced modulo N.
    pub dq: usize,
    /// `lambda_m(dq)` indexed by code value `m`.
    pub eigenvalues: Vec<Complex64>,
    /// `|lambda_m(0) - 1|` at lag 0, `|lambda_m(dq)|` otherwise.
    pub singular_values: Vec<f64>,
}

impl BlockSpectrum {
    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.iter().copied().fold(0.0, f64::max)
    }
}

/// Closed-form Gram-block spectrum at lag `dq` (any integer, wrapped mod N).
pub fn block_eigenvalues_closed_form(codes: &FrequencyCodes, dq: i64) -> BlockSpectrum {
    let n = codes.n_pulses();
    let m = codes.n_freqs();
    let lag = dq.rem_euclid(n as i64) as usize;
    let mut eigenvalues = alloc::vec![Complex64::new(0.0, 0.0); m];
    for (pulse, &code) in codes.codes().iter().enumerate() {
        eigenvalues[code] += Complex64::from_polar(1.0, TAU * ((lag * pulse) % n) as f64 / n as f64);
    }
    let weight = m as f64 / n as f64;
    for lambda in eigenvalues.iter_mut() {
        *lambda *= weight;
    }
    let singular_values = eigenvalues.iter().map(|&l| if lag == 0 { (l - 1.0).norm() } else { l.norm() }).collect();
    BlockSpectrum { dq: lag, eigenvalues, singular_values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CoherenceMethod {
    /// Circulant eigenvalue formulas; simplified Doppler model only.
    ClosedForm,
    /// Singular values of the numerically formed Gram blocks.
    NumericSvd,
}

/// Block coherences and spectral norm of one observation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CoherenceReport {
    pub mu_intra: f64,
    pub mu_inter: f64,
    pub spectral_norm: f64,
    pub mode: DopplerMode,
    pub method: CoherenceMethod,
}

/// `max_m |lambda_m(0) - 1|`.
pub fn intra_block_coherence_closed_form(codes: &FrequencyCodes) -> f64 {
    block_eigenvalues_closed_form(codes, 0).max_singular_value()
}

/// `max_{1 <= dq <= N/2} max_m |lambda_m(dq)|`; lags above N/2 repeat by
/// conjugate symmetry.
pub fn inter_block_coherence_closed_form(codes: &FrequencyCodes) -> f64 {
    let half = codes.n_pulses() / 2;
    (1..=half).map(|dq| block_eigenvalues_closed_form(codes, dq as i64).max_singular_value()).fold(0.0, f64::max)
}

/// `max_q || Psi_q^H Psi_q - I ||_s`.
pub fn intra_block_coherence_numeric(matrix: &ObservationMatrix) -> f64 {
    let m = matrix.block_size();
    (0..matrix.n_blocks())
        .map(|q| {
            let g = gram_block(matrix, q, q).expect("block index in range");
            linalg::spectral_norm(&(g.block - DMatrix::<Complex64>::identity(m, m)))
        })
        .fold(0.0, f64::max)
}

/// `max_{q1 != q2} || Psi_{q1}^H Psi_{q2} ||_s`. The pair `(q2, q1)` is the
/// adjoint of `(q1, q2)`, so only `q1 < q2` is visited.
pub fn inter_block_coherence_numeric(matrix: &ObservationMatrix) -> Result<f64> {
    let n = matrix.n_blocks();
    if n > NUMERIC_INTER_BLOCK_LIMIT {
        return Err(Error::TooLargeForNumeric { n, limit: NUMERIC_INTER_BLOCK_LIMIT });
    }
    let mut worst = 0.0_f64;
    for q1 in 0..n {
        let a = matrix.block(q1)?.adjoint();
        for q2 in q1 + 1..n {
            worst = worst.max(linalg::spectral_norm(&(&a * matrix.block(q2)?)));
        }
    }
    Ok(worst)
}

pub fn intra_block_coherence(matrix: &ObservationMatrix, method: CoherenceMethod) -> Result<f64> {
    match method {
        CoherenceMethod::ClosedForm => {
            require_simplified(matrix)?;
            Ok(intra_block_coherence_closed_form(matrix.codes()))
        }
        CoherenceMethod::NumericSvd => Ok(intra_block_coherence_numeric(matrix)),
    }
}

pub fn inter_block_coherence(matrix: &ObservationMatrix, method: CoherenceMethod) -> Result<f64> {
    match method {
        CoherenceMethod::ClosedForm => {
            require_simplified(matrix)?;
            Ok(inter_block_coherence_closed_form(matrix.codes()))
        }
        CoherenceMethod::NumericSvd => inter_block_coherence_numeric(matrix),
    }
}

fn require_simplified(matrix: &ObservationMatrix) -> Result<()> {
    match matrix.mode() {
        DopplerMode::Simplified => Ok(()),
        DopplerMode::Exact => Err(Error::ClosedFormRequiresSimplified),
    }
}

/// `||Psi||_s`: exactly `sqrt(M)` under the simplified model, the largest
/// singular value computed numerically otherwise.
pub fn spectral_norm(matrix: &ObservationMatrix) -> f64 {
    match matrix.mode() {
        DopplerMode::Simplified => (matrix.block_size() as f64).sqrt(),
        DopplerMode::Exact => spectral_norm_numeric(matrix),
    }
}

/// Largest singular value from the N x N Gram matrix `Psi Psi^H`.
pub fn spectral_norm_numeric(matrix: &ObservationMatrix) -> f64 {
    let a = matrix.entries();
    linalg::max_hermitian_eigenvalue(a * a.adjoint()).max(0.0).sqrt()
}

/// Eigenvalues of `Psi^H Psi` under the simplified model, indexed `q*M + m`:
/// `M` when `C_{(N - q) mod N} = m`, zero otherwise.
pub fn full_gram_eigenvalues(codes: &FrequencyCodes) -> Vec<f64> {
    let n = codes.n_pulses();
    let m = codes.n_freqs();
    let mut out = alloc::vec![0.0; n * m];
    for q in 0..n {
        out[q * m + codes.codes()[(n - q) % n]] = m as f64;
    }
    out
}

/// Coherences and spectral norm in one pass.
pub fn coherence_report(matrix: &ObservationMatrix, method: CoherenceMethod) -> Result<CoherenceReport> {
    Ok(CoherenceReport {
        mu_intra: intra_block_coherence(matrix, method)?,
        mu_inter: inter_block_coherence(matrix, method)?,
        spectral_norm: match method {
            CoherenceMethod::ClosedForm => spectral_norm(matrix),
            CoherenceMethod::NumericSvd => spectral_norm_numeric(matrix),
        },
        mode: matrix.mode(),
        method,
    })
}
