//! Exact-recovery and hit-rate Monte Carlo sweeps.

use std::collections::BTreeSet;

use rsfr_core::metrics::{exact_recovery_metric, hit_rate_metric};
use rsfr_core::recovery::{extract_support_topk, recover, RecoveryResult};
use rsfr_core::spectral::spectral_norm;
use rsfr_core::{
    build_observation_matrix, draw_codes, scene_to_vector, snr_to_noise_power, synthesize_measurement,
    synthesize_scene, Algorithm, ObservationMatrix, SolverConfig, SparsityHint,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spec::{ExperimentKind, ExperimentSpec};
use crate::trials::map_trials;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    ExactRecoveryRate,
    HitRate,
}

/// One cell of a sweep. `failures` counts trials where the solver returned an
/// error (scored as zero); `unconverged` counts trials that hit the iteration
/// cap and were scored on the partial result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub algorithm: Algorithm,
    pub mode: String,
    pub k: usize,
    pub snr_db: Option<f64>,
    pub metric: MetricName,
    pub value: f64,
    /// `sqrt(v (1 - v) / trials)`.
    pub std_error: f64,
    pub trials: usize,
    pub failures: usize,
    pub unconverged: usize,
}

impl MetricsRow {
    fn new(
        algorithm: Algorithm,
        mode: String,
        k: usize,
        snr_db: Option<f64>,
        metric: MetricName,
        tally: &Tally,
        trials: usize,
    ) -> Self {
        let value = tally.sum / trials as f64;
        Self {
            algorithm,
            mode,
            k,
            snr_db,
            metric,
            value,
            std_error: (value * (1.0 - value) / trials as f64).max(0.0).sqrt(),
            trials,
            failures: tally.failures,
            unconverged: tally.unconverged,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    sum: f64,
    failures: usize,
    unconverged: usize,
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    score: f64,
    failed: bool,
    unconverged: bool,
}

impl Tally {
    fn add(&mut self, o: &Outcome) {
        self.sum += o.score;
        self.failures += o.failed as usize;
        self.unconverged += o.unconverged as usize;
    }
}

/// Support rule of the sweeps: greedy solvers report their own support, the
/// noiseless basis-pursuit programs threshold at the solver's support
/// threshold, and everything else keeps the `count` largest magnitudes.
pub fn estimated_support(
    algorithm: Algorithm,
    result: &RecoveryResult,
    count: usize,
    noiseless: bool,
) -> BTreeSet<usize> {
    match algorithm {
        Algorithm::Omp | Algorithm::BlockOmp => result.support.clone(),
        Algorithm::BasisPursuit | Algorithm::BlockBasisPursuit if noiseless => result.support.clone(),
        _ => extract_support_topk(&result.estimate, count),
    }
}

fn solver_for(spec: &ExperimentSpec, matrix: &ObservationMatrix) -> SolverConfig {
    let mut config = spec.solver;
    let needs_norm = spec.algorithms.iter().any(|a| matches!(a, Algorithm::Lasso | Algorithm::BlockLasso));
    if needs_norm && config.lipschitz.is_none() {
        let s = spectral_norm(matrix);
        config.lipschitz = Some(s * s);
    }
    config
}

fn score<F>(
    algorithm: Algorithm,
    matrix: &ObservationMatrix,
    y: &[rsfr_core::Complex64],
    hint: SparsityHint,
    config: &SolverConfig,
    noiseless: bool,
    metric: F,
) -> Result<Outcome>
where
    F: Fn(&BTreeSet<usize>) -> Result<f64>,
{
    if hint.blocks == 0 {
        return Ok(Outcome { score: metric(&BTreeSet::new())?, failed: false, unconverged: false });
    }
    Ok(match recover(algorithm, matrix, y, hint, config) {
        Ok(r) => Outcome {
            score: metric(&estimated_support(algorithm, &r, hint.entries, noiseless))?,
            failed: false,
            unconverged: !r.converged,
        },
        Err(_) => Outcome { score: 0.0, failed: true, unconverged: false },
    })
}

/// Noiseless sweep over the number of targets: per (mode, K, algorithm) the
/// fraction of trials whose recovered support equals the truth. OMP gets
/// sparsity `K * P`, Block-OMP block sparsity `K`.
pub fn run_exact_rate_experiment(spec: &ExperimentSpec) -> Result<Vec<MetricsRow>> {
    if spec.kind != ExperimentKind::ExactRate {
        return Err(Error::Config("run_exact_rate_experiment needs an exact-rate spec".into()));
    }
    spec.validate()?;
    let mode_params = spec.modes.iter().map(|m| m.params(&spec.params)).collect::<Result<Vec<_>>>()?;
    let per = spec.scatterers_per_target;
    let per_trial = map_trials(spec.trials, |t| {
        let seed = spec.trial_seed(t);
        let mut out = Vec::new();
        for (mode, params) in spec.modes.iter().zip(&mode_params) {
            let matrix = build_observation_matrix(params, &draw_codes(params, seed), mode.mode)?;
            let config = solver_for(spec, &matrix);
            for &k in &spec.k_range {
                let x = scene_to_vector(&synthesize_scene(params, k, per, seed)?, params)?;
                let y = matrix.apply(x.values())?;
                let truth = x.support();
                for &alg in &spec.algorithms {
                    out.push(score(
                        alg,
                        &matrix,
                        &y,
                        SparsityHint { entries: k * per, blocks: k },
                        &config,
                        true,
                        |s| Ok(exact_recovery_metric(s, &truth) as f64),
                    )?);
                }
            }
        }
        Ok(out)
    })?;
    let mut rows = Vec::new();
    let mut cell = 0;
    for mode in &spec.modes {
        for &k in &spec.k_range {
            for &alg in &spec.algorithms {
                let mut tally = Tally::default();
                per_trial.iter().for_each(|t| tally.add(&t[cell]));
                rows.push(MetricsRow::new(
                    alg,
                    mode.label(),
                    k,
                    None,
                    MetricName::ExactRecoveryRate,
                    &tally,
                    spec.trials,
                ));
                cell += 1;
            }
        }
    }
    Ok(rows)
}

/// Noisy sweep over (K, SNR) with `sigma^2 = 10^(-SNR/10)`: per cell the mean
/// fraction of true nonzero entries found. The noise realizations for one
/// trial are scaled copies of each other across SNR values.
pub fn run_hit_rate_experiment(spec: &ExperimentSpec) -> Result<Vec<MetricsRow>> {
    if spec.kind != ExperimentKind::HitRate {
        return Err(Error::Config("run_hit_rate_experiment needs a hit-rate spec".into()));
    }
    spec.validate()?;
    let mode_params = spec.modes.iter().map(|m| m.params(&spec.params)).collect::<Result<Vec<_>>>()?;
    let per = spec.scatterers_per_target;
    let per_trial = map_trials(spec.trials, |t| {
        let seed = spec.trial_seed(t);
        let mut out = Vec::new();
        for (mode, params) in spec.modes.iter().zip(&mode_params) {
            let matrix = build_observation_matrix(params, &draw_codes(params, seed), mode.mode)?;
            let config = solver_for(spec, &matrix);
            for &k in &spec.k_range {
                let x = scene_to_vector(&synthesize_scene(params, k, per, seed)?, params)?;
                let truth = x.support();
                for &snr in &spec.snr_range_db {
                    let y = synthesize_measurement(&matrix, &x, snr_to_noise_power(snr), seed)?.samples;
                    for &alg in &spec.algorithms {
                        out.push(score(
                            alg,
                            &matrix,
                            &y,
                            SparsityHint { entries: k * per, blocks: k },
                            &config,
                            false,
                            |s| Ok(hit_rate_metric(s, &truth)?),
                        )?);
                    }
                }
            }
        }
        Ok(out)
    })?;
    let mut rows = Vec::new();
    let mut cell = 0;
    for mode in &spec.modes {
        for &k in &spec.k_range {
            for &snr in &spec.snr_range_db {
                for &alg in &spec.algorithms {
                    let mut tally = Tally::default();
                    per_trial.iter().for_each(|t| tally.add(&t[cell]));
                    rows.push(MetricsRow::new(
                        alg,
                        mode.label(),
                        k,
                        Some(snr),
                        MetricName::HitRate,
                        &tally,
                        spec.trials,
                    ));
                    cell += 1;
                }
            }
        }
    }
    Ok(rows)
}
