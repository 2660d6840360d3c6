//! The single-instance `recover` configuration and its output document.

use std::path::Path;

use rsfr_core::metrics::{exact_recovery_metric, hit_rate_metric};
use rsfr_core::recovery::{debias_least_squares, magnitude_grid, recover};
use rsfr_core::{
    build_observation_matrix, draw_codes, scene_to_vector, snr_to_noise_power, synthesize_measurement, Algorithm,
    Complex64, DopplerMode, FrequencyCodes, RadarParams, SolverConfig, SparsityHint, TargetScene,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Input of `rsfr recover`. Complex amplitudes are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoverConfig {
    pub params: RadarParams,
    #[serde(default = "default_mode")]
    pub mode: DopplerMode,
    /// Seeds the codes (unless given explicitly) and the noise.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub codes: Option<Vec<usize>>,
    pub scene: TargetScene,
    /// Noiseless when absent.
    #[serde(default)]
    pub snr_db: Option<f64>,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Greedy sparsity levels; taken from the scene when absent.
    #[serde(default)]
    pub sparsity: Option<SparsityLevels>,
    /// Least-squares refit on the recovered support.
    #[serde(default)]
    pub debias: bool,
}

fn default_mode() -> DopplerMode {
    DopplerMode::Exact
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityLevels {
    pub entries: usize,
    pub blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoverOutput {
    pub algorithm: Algorithm,
    pub converged: bool,
    pub iterations: usize,
    pub residual_norm: f64,
    pub support: Vec<usize>,
    pub block_support: Vec<usize>,
    pub estimate: Vec<Complex64>,
    /// `|x|` on the M x N range-velocity grid, row `p`, column `q`.
    pub magnitude_grid: Vec<Vec<f64>>,
    pub velocity_spectrum: Vec<f64>,
    pub true_support: Vec<usize>,
    pub exact_recovery: bool,
    pub hit_rate: Option<f64>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Builds the instance described by `config`, runs the solver and scores the
/// result against the scene. For the matched filter and the convex solvers
/// the scored support is the solver's thresholded support.
pub fn run_recover(config: &RecoverConfig) -> Result<RecoverOutput> {
    let params = &config.params;
    params.validate()?;
    config.solver.validate()?;
    config.scene.validate(params)?;
    let codes = match &config.codes {
        Some(c) => FrequencyCodes::from_codes(c.clone(), params.n_freqs)?,
        None => draw_codes(params, config.seed),
    };
    codes.check_against(params)?;
    let matrix = build_observation_matrix(params, &codes, config.mode)?;
    let x = scene_to_vector(&config.scene, params)?;
    let noise_power = match config.snr_db {
        Some(s) if !s.is_finite() => return Err(Error::Config("snr_db must be finite".into())),
        Some(s) => snr_to_noise_power(s),
        None => 0.0,
    };
    let y = synthesize_measurement(&matrix, &x, noise_power, config.seed)?.samples;
    let hint = match config.sparsity {
        Some(s) => SparsityHint { entries: s.entries, blocks: s.blocks },
        None => SparsityHint { entries: config.scene.n_scatterers(), blocks: config.scene.n_targets() },
    };
    let mut result = recover(config.algorithm, &matrix, &y, hint, &config.solver)?;
    if config.debias {
        result.estimate = debias_least_squares(&matrix, &y, &result.support)?.estimate;
        result.velocity_spectrum = rsfr_core::recovery::velocity_spectrum(&result.estimate, params.n_freqs)?;
    }
    let truth = x.support();
    Ok(RecoverOutput {
        algorithm: config.algorithm,
        converged: result.converged,
        iterations: result.iterations,
        residual_norm: result.residual_norm,
        exact_recovery: exact_recovery_metric(&result.support, &truth) == 1,
        hit_rate: hit_rate_metric(&result.support, &truth).ok(),
        support: result.support.iter().copied().collect(),
        block_support: result.block_support.iter().copied().collect(),
        magnitude_grid: magnitude_grid(&result.estimate, params.n_freqs)?,
        velocity_spectrum: result.velocity_spectrum,
        estimate: result.estimate,
        true_support: truth.into_iter().collect(),
    })
}
