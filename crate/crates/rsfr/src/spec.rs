//! Experiment descriptions and the desk/paper presets.

use std::fmt;

use rsfr_core::{Algorithm, DopplerMode, RadarParams, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Ccdf,
    ExactRate,
    HitRate,
    Analyze,
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    #[default]
    Desk,
    Paper,
}

/// A Doppler model, optionally with the carrier re-derived from a relative
/// bandwidth `M * df / fc`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub mode: DopplerMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_bandwidth: Option<f64>,
}

impl ModeSpec {
    pub fn simplified() -> Self {
        Self { mode: DopplerMode::Simplified, relative_bandwidth: None }
    }

    pub fn exact(relative_bandwidth: Option<f64>) -> Self {
        Self { mode: DopplerMode::Exact, relative_bandwidth }
    }

    pub fn params(&self, base: &RadarParams) -> Result<RadarParams> {
        match self.relative_bandwidth {
            Some(rb) => Ok(base.with_relative_bandwidth(rb)?),
            None => Ok(*base),
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ModeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.mode {
            DopplerMode::Exact => "exact",
            DopplerMode::Simplified => "simplified",
        };
        match self.relative_bandwidth {
            Some(rb) => write!(f, "{name}-rb{rb}"),
            None => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub params: RadarParams,
    pub modes: Vec<ModeSpec>,
    pub trials: usize,
    #[serde(default)]
    pub k_range: Vec<usize>,
    #[serde(default)]
    pub snr_range_db: Vec<f64>,
    /// Trial `t` uses seed `base_seed + t` for codes, scene and noise.
    pub base_seed: u64,
    #[serde(default)]
    pub algorithms: Vec<Algorithm>,
    /// Scatterers per target, `P`.
    #[serde(default = "default_scatterers")]
    pub scatterers_per_target: usize,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_scatterers() -> usize {
    8
}

impl ExperimentSpec {
    /// Coherence CCDFs at N = 32, M = 4 under the simplified model and the
    /// exact model at relative bandwidths 0.01 and 0.1.
    pub fn ccdf(_scale: Scale) -> Self {
        Self {
            kind: ExperimentKind::Ccdf,
            params: RadarParams::x_band(32, 4).expect("valid preset"),
            modes: vec![ModeSpec::simplified(), ModeSpec::exact(Some(0.01)), ModeSpec::exact(Some(0.1))],
            trials: 1000,
            k_range: Vec::new(),
            snr_range_db: Vec::new(),
            base_seed: 0,
            algorithms: Vec::new(),
            scatterers_per_target: default_scatterers(),
            solver: SolverConfig::default(),
        }
    }

    /// Noiseless exact-recovery sweep over the number of targets.
    pub fn exact_rate(scale: Scale) -> Self {
        let (n, trials, k_max) = match scale {
            Scale::Desk => (64, 200, 8),
            Scale::Paper => (128, 1000, 12),
        };
        Self {
            kind: ExperimentKind::ExactRate,
            params: RadarParams::x_band(n, 8).expect("valid preset"),
            modes: vec![ModeSpec::exact(None)],
            trials,
            k_range: (1..=k_max).collect(),
            snr_range_db: Vec::new(),
            base_seed: 0,
            algorithms: vec![
                Algorithm::Omp,
                Algorithm::BlockOmp,
                Algorithm::BasisPursuit,
                Algorithm::BlockBasisPursuit,
            ],
            scatterers_per_target: 8,
            solver: SolverConfig::default(),
        }
    }

    /// Noisy hit-rate grid over (targets, SNR).
    pub fn hit_rate(scale: Scale) -> Self {
        let (n, trials, k_max, snr) = match scale {
            Scale::Desk => (64, 200, 6, vec![0.0, 5.0, 10.0, 15.0]),
            Scale::Paper => (128, 1000, 12, (0..=10).map(|i| -5.0 + 2.5 * i as f64).collect()),
        };
        Self {
            kind: ExperimentKind::HitRate,
            params: RadarParams::x_band(n, 8).expect("valid preset"),
            modes: vec![ModeSpec::exact(None)],
            trials,
            k_range: (1..=k_max).collect(),
            snr_range_db: snr,
            base_seed: 0,
            algorithms: vec![Algorithm::Omp, Algorithm::BlockOmp, Algorithm::Lasso, Algorithm::BlockLasso],
            scatterers_per_target: 8,
            solver: SolverConfig::default(),
        }
    }

    pub fn preset(kind: ExperimentKind, scale: Scale) -> Self {
        match kind {
            ExperimentKind::ExactRate => Self::exact_rate(scale),
            ExperimentKind::HitRate => Self::hit_rate(scale),
            _ => Self { kind, ..Self::ccdf(scale) },
        }
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.solver.validate()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.modes.is_empty() {
            return Err(Error::Config("at least one Doppler mode is required".into()));
        }
        for m in &self.modes {
            m.params(&self.params)?;
        }
        let (n, m) = (self.params.n_pulses, self.params.n_freqs);
        match self.kind {
            ExperimentKind::ExactRate | ExperimentKind::HitRate => {
                if self.algorithms.is_empty() {
                    return Err(Error::Config("no algorithms selected".into()));
                }
                if self.k_range.is_empty() {
                    return Err(Error::Config("empty target-count range".into()));
                }
                if let Some(&k) = self.k_range.iter().find(|&&k| k > n) {
                    return Err(Error::Config(format!("{k} targets exceed the {n} velocity cells")));
                }
                if self.scatterers_per_target == 0 || self.scatterers_per_target > m {
                    return Err(Error::Config(format!("scatterers per target must lie in 1..={m}")));
                }
            }
            _ => {}
        }
        if self.kind == ExperimentKind::HitRate {
            if self.snr_range_db.is_empty() {
                return Err(Error::Config("empty SNR range".into()));
            }
            if self.snr_range_db.iter().any(|s| !s.is_finite()) {
                return Err(Error::Config("SNR values must be finite".into()));
            }
            if self.k_range.contains(&0) {
                return Err(Error::Config("hit rate is undefined for an empty scene (K = 0)".into()));
            }
        }
        Ok(())
    }
}
