//! Empirical CCDFs of the block coherences and the spectral norm.

use rsfr_core::bounds::{mu_inter_ccdf_bound, mu_intra_ccdf_bound};
use rsfr_core::spectral::{coherence_report, CoherenceMethod};
use rsfr_core::{build_observation_matrix, draw_codes, DopplerMode};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spec::{ExperimentKind, ExperimentSpec};
use crate::trials::map_trials;

/// Number of thresholds in every CCDF grid.
pub const GRID_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    MuIntra,
    MuInter,
    SpectralNorm,
}

impl Quantity {
    pub const ALL: [Quantity; 3] = [Quantity::MuIntra, Quantity::MuInter, Quantity::SpectralNorm];
}

/// One point of a CCDF curve. `bound` is the clamped analytic union bound
/// (absent for the spectral norm) and `bound_raw` its unclamped value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcdfPoint {
    pub quantity: Quantity,
    pub mode: String,
    pub threshold: f64,
    pub ccdf: f64,
    pub bound: Option<f64>,
    pub bound_raw: Option<f64>,
    pub trials: usize,
}

/// Per-trial values of one quantity under one mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcdfSamples {
    pub quantity: Quantity,
    pub mode: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcdfTable {
    pub points: Vec<CcdfPoint>,
    pub samples: Vec<CcdfSamples>,
}

/// Fraction of `values` strictly above `threshold`.
pub fn empirical_ccdf(values: &[f64], threshold: f64) -> f64 {
    values.iter().filter(|&&v| v > threshold).count() as f64 / values.len() as f64
}

/// `GRID_POINTS` uniform thresholds on `[0, 1.1 * max]`.
pub fn threshold_grid(max: f64) -> Vec<f64> {
    let top = if max > 0.0 { 1.1 * max } else { 1.0 };
    (0..GRID_POINTS).map(|i| top * i as f64 / (GRID_POINTS - 1) as f64).collect()
}

/// Draws fresh codes per trial and records mu_I, mu_B and ||Psi||_s for every
/// mode: closed form under the simplified model, dense SVDs under the exact
/// one. Trials share their codes across modes.
pub fn run_ccdf_experiment(spec: &ExperimentSpec) -> Result<CcdfTable> {
    if spec.kind != ExperimentKind::Ccdf {
        return Err(Error::Config("run_ccdf_experiment needs a ccdf spec".into()));
    }
    spec.validate()?;
    let mode_params = spec.modes.iter().map(|m| m.params(&spec.params)).collect::<Result<Vec<_>>>()?;
    let per_trial = map_trials(spec.trials, |t| {
        let codes = draw_codes(&spec.params, spec.trial_seed(t));
        spec.modes
            .iter()
            .zip(&mode_params)
            .map(|(mode, params)| {
                let matrix = build_observation_matrix(params, &codes, mode.mode)?;
                let method = match mode.mode {
                    DopplerMode::Simplified => CoherenceMethod::ClosedForm,
                    DopplerMode::Exact => CoherenceMethod::NumericSvd,
                };
                let r = coherence_report(&matrix, method)?;
                Ok([r.mu_intra, r.mu_inter, r.spectral_norm])
            })
            .collect::<Result<Vec<[f64; 3]>>>()
    })?;

    let (m, n) = (spec.params.n_freqs, spec.params.n_pulses);
    let mut samples = Vec::new();
    let mut points = Vec::new();
    for (qi, quantity) in Quantity::ALL.into_iter().enumerate() {
        let per_mode: Vec<Vec<f64>> =
            (0..spec.modes.len()).map(|mi| per_trial.iter().map(|row| row[mi][qi]).collect()).collect();
        let max = per_mode.iter().flatten().copied().fold(0.0, f64::max);
        let grid = threshold_grid(max);
        for (mode, values) in spec.modes.iter().zip(per_mode) {
            for &c in &grid {
                let bound = match quantity {
                    Quantity::MuIntra => Some(mu_intra_ccdf_bound(c, m, n)),
                    Quantity::MuInter => Some(mu_inter_ccdf_bound(c, m, n)),
                    Quantity::SpectralNorm => None,
                }
                .transpose()
                .or_else(|e| match e {
                    // The union bounds are undefined for M = 1; leave them out.
                    rsfr_core::Error::InvalidBoundArgument(_) if m < 2 => Ok(None),
                    e => Err(e),
                })?;
                points.push(CcdfPoint {
                    quantity,
                    mode: mode.label(),
                    threshold: c,
                    ccdf: empirical_ccdf(&values, c),
                    bound: bound.map(|b| b.value),
                    bound_raw: bound.map(|b| b.raw),
                    trials: spec.trials,
                });
            }
            samples.push(CcdfSamples { quantity, mode: mode.label(), values });
        }
    }
    Ok(CcdfTable { points, samples })
}
