//! Range-Doppler reconstruction: matched filter, greedy pursuits, proximal
//! solvers for the (block) Lasso and an ADMM solver for the noiseless (block)
//! basis-pursuit programs.

mod admm;
mod greedy;
mod proximal;
mod support;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::linalg;
use crate::matrix::ObservationMatrix;
use crate::{Error, Result};
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

pub use admm::basis_pursuit_solve;
pub use greedy::{block_omp, omp};
pub use proximal::{block_lasso_solve, block_soft_threshold, lasso_solve, soft_threshold};
pub use support::{
    debias_least_squares, extract_support_topk, magnitude_grid, threshold_support, velocity_spectrum, Debiased,
};

/// Magnitude above which an entry of a convex-program solution counts as nonzero.
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-5;

/// Output of every reconstruction routine.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RecoveryResult {
    pub estimate: Vec<Complex64>,
    /// Entry indices declared nonzero.
    pub support: BTreeSet<usize>,
    /// `{ i / M : i in support }`.
    pub block_support: BTreeSet<usize>,
    /// Per-velocity-cell norm of the estimate, `||x_q||_2`.
    pub velocity_spectrum: Vec<f64>,
    /// Greedy selection order (columns for OMP, blocks for Block-OMP); empty
    /// for the other solvers.
    pub selected: Vec<usize>,
    pub iterations: usize,
    /// `||y - Psi x||_2`.
    pub residual_norm: f64,
    pub converged: bool,
}

impl RecoveryResult {
    fn assemble(
        matrix: &ObservationMatrix,
        y: &[Complex64],
        estimate: Vec<Complex64>,
        support: BTreeSet<usize>,
        iterations: usize,
        converged: bool,
    ) -> Result<Self> {
        let m = matrix.block_size();
        let fitted = matrix.apply(&estimate)?;
        let residual: Vec<Complex64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
        Ok(Self {
            block_support: support.iter().map(|i| i / m).collect(),
            velocity_spectrum: velocity_spectrum(&estimate, m)?,
            residual_norm: linalg::norm(&residual),
            estimate,
            support,
            selected: Vec::new(),
            iterations,
            converged,
        })
    }
}

/// Tuning shared by the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SolverConfig {
    /// Regularization weight. `None` selects `0.1 * ||Psi^H y||_inf` for the
    /// Lasso and `0.1 * max_q ||Psi_q^H y||_2` for the Block-Lasso.
    pub lambda: Option<f64>,
    pub max_iterations: usize,
    /// Relative objective change (proximal solvers) or relative feasibility
    /// (basis pursuit) at which iteration stops.
    pub tolerance: f64,
    pub support_threshold: f64,
    /// ADMM penalty parameter.
    pub penalty: f64,
    /// Precomputed `||Psi||_s^2` for the proximal step; computed from the
    /// matrix when `None`.
    pub lipschitz: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda: None,
            max_iterations: 5000,
            tolerance: 1e-8,
            support_threshold: DEFAULT_SUPPORT_THRESHOLD,
            penalty: 1.0,
            lipschitz: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.lambda {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidConfig("lambda must be positive"));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive"));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive"));
        }
        if !(self.support_threshold.is_finite() && self.support_threshold > 0.0) {
            return Err(Error::InvalidConfig("support threshold must be positive"));
        }
        if !(self.penalty.is_finite() && self.penalty > 0.0) {
            return Err(Error::InvalidConfig("ADMM penalty must be positive"));
        }
        if let Some(l) = self.lipschitz {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidConfig("Lipschitz constant must be positive"));
            }
        }
        Ok(())
    }
}

/// `x = Psi^H y`. The support is left empty.
pub fn matched_filter(matrix: &ObservationMatrix, y: &[Complex64]) -> Result<RecoveryResult> {
    let estimate = matrix.adjoint_apply(y)?;
    RecoveryResult::assemble(matrix, y, estimate, BTreeSet::new(), 1, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Algorithm {
    MatchedFilter,
    Omp,
    BlockOmp,
    Lasso,
    BlockLasso,
    #[cfg_attr(feature = "serde", serde(rename = "bp"))]
    BasisPursuit,
    #[cfg_attr(feature = "serde", serde(rename = "block-bp"))]
    BlockBasisPursuit,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::MatchedFilter,
        Algorithm::Omp,
        Algorithm::BlockOmp,
        Algorithm::Lasso,
        Algorithm::BlockLasso,
        Algorithm::BasisPursuit,
        Algorithm::BlockBasisPursuit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MatchedFilter => "mf",
            Algorithm::Omp => "omp",
            Algorithm::BlockOmp => "block-omp",
            Algorithm::Lasso => "lasso",
            Algorithm::BlockLasso => "block-lasso",
            Algorithm::BasisPursuit => "bp",
            Algorithm::BlockBasisPursuit => "block-bp",
        }
    }

    pub fn is_greedy(self) -> bool {
        matches!(self, Algorithm::Omp | Algorithm::BlockOmp)
    }

    pub fn is_blockwise(self) -> bool {
        matches!(self, Algorithm::BlockOmp | Algorithm::BlockLasso | Algorithm::BlockBasisPursuit)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase().replace('_', "-");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == lower)
            .or(match lower.as_str() {
                "matched-filter" => Some(Algorithm::MatchedFilter),
                "blockomp" => Some(Algorithm::BlockOmp),
                "blocklasso" => Some(Algorithm::BlockLasso),
                "basis-pursuit" | "l1" => Some(Algorithm::BasisPursuit),
                "blockbp" | "block-basis-pursuit" | "l21" => Some(Algorithm::BlockBasisPursuit),
                _ => None,
            })
            .ok_or(Error::InvalidConfig("unknown algorithm"))
    }
}

/// Sparsity knowledge handed to the greedy solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparsityHint {
    /// Number of nonzero entries (OMP).
    pub entries: usize,
    /// Number of nonzero blocks (Block-OMP).
    pub blocks: usize,
}

/// Runs `algorithm` on one measurement.
pub fn recover(
    algorithm: Algorithm,
    matrix: &ObservationMatrix,
    y: &[Complex64],
    hint: SparsityHint,
    config: &SolverConfig,
) -> Result<RecoveryResult> {
    match algorithm {
        Algorithm::MatchedFilter => matched_filter(matrix, y),
        Algorithm::Omp => omp(matrix, y, hint.entries),
        Algorithm::BlockOmp => block_omp(matrix, y, hint.blocks),
        Algorithm::Lasso => lasso_solve(matrix, y, config),
        Algorithm::BlockLasso => block_lasso_solve(matrix, y, config),
        Algorithm::BasisPursuit => basis_pursuit_solve(matrix, y, config, false),
        Algorithm::BlockBasisPursuit => basis_pursuit_solve(matrix, y, config, true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::draw_codes;
    use crate::matrix::build_observation_matrix;
    use crate::params::{DopplerMode, RadarParams};

    #[test]
    fn matched_filter_of_zero_is_zero() {
        let p = RadarParams::x_band(8, 2).unwrap();
        let psi = build_observation_matrix(&p, &draw_codes(&p, 0), DopplerMode::Exact).unwrap();
        let r = matched_filter(&psi, &[Complex64::new(0.0, 0.0); 8]).unwrap();
        assert!(r.estimate.iter().all(|v| v.norm() == 0.0));
        assert!(r.support.is_empty());
    }

    #[test]
    fn matched_filter_recovers_isolated_scatterer_amplitude() {
        let p = RadarParams::x_band(16, 4).unwrap();
        let psi = build_observation_matrix(&p, &draw_codes(&p, 6), DopplerMode::Exact).unwrap();
        let mut x = alloc::vec![Complex64::new(0.0, 0.0); 64];
        x[22] = Complex64::new(4.0 * 0.3, -4.0 * 0.8);
        let y = psi.apply(&x).unwrap();
        let r = matched_filter(&psi, &y).unwrap();
        assert!((r.estimate[22] - x[22]).norm() < 1e-12);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("cosamp".parse::<Algorithm>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        assert!(SolverConfig { lambda: Some(0.0), ..Default::default() }.validate().is_err());
        assert!(SolverConfig { max_iterations: 0, ..Default::default() }.validate().is_err());
        assert!(SolverConfig { penalty: -1.0, ..Default::default() }.validate().is_err());
    }
}
