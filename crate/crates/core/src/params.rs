//! Radar parameterization and the Doppler model switch.

use crate::{Error, Result};
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Slow-time parameters of a randomized stepped-frequency radar.
///
/// `n_pulses` (N) pulses per coherent processing interval, each transmitted on
/// carrier `carrier + C_n * freq_step` with the code `C_n` drawn from
/// `0..n_freqs` (M).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RadarParams {
    pub n_pulses: usize,
    pub n_freqs: usize,
    /// Frequency step in Hz.
    pub freq_step: f64,
    /// Initial carrier frequency in Hz.
    pub carrier: f64,
    /// Pulse repetition interval in seconds.
    pub pri: f64,
}

impl RadarParams {
    pub fn new(n_pulses: usize, n_freqs: usize, freq_step: f64, carrier: f64, pri: f64) -> Result<Self> {
        let params = Self { n_pulses, n_freqs, freq_step, carrier, pri };
        params.validate()?;
        Ok(params)
    }

    /// Parameters of the paper-scale simulations: 9 GHz carrier, 20 us PRI,
    /// 30 MHz step.
    pub fn x_band(n_pulses: usize, n_freqs: usize) -> Result<Self> {
        Self::new(n_pulses, n_freqs, 30e6, 9e9, 20e-6)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_pulses == 0 {
            return Err(Error::InvalidParams("pulse count N must be at least 1"));
        }
        if self.n_freqs == 0 {
            return Err(Error::InvalidParams("frequency count M must be at least 1"));
        }
        if !(self.freq_step.is_finite() && self.freq_step > 0.0) {
            return Err(Error::InvalidParams("frequency step must be positive"));
        }
        if !(self.carrier.is_finite() && self.carrier > 0.0) {
            return Err(Error::InvalidParams("carrier must be positive"));
        }
        if !(self.pri.is_finite() && self.pri > 0.0) {
            return Err(Error::InvalidParams("PRI must be positive"));
        }
        Ok(())
    }

    /// Number of columns of the observation matrix, `M * N`.
    pub fn grid_size(&self) -> usize {
        self.n_pulses * self.n_freqs
    }

    /// Synthetic bandwidth `M * freq_step` in Hz.
    pub fn synthetic_bandwidth(&self) -> f64 {
        self.n_freqs as f64 * self.freq_step
    }

    /// `M * freq_step / carrier`.
    pub fn relative_bandwidth(&self) -> f64 {
        self.synthetic_bandwidth() / self.carrier
    }

    /// Same radar with the carrier moved so that the relative bandwidth equals
    /// `rb`, holding the frequency step fixed.
    pub fn with_relative_bandwidth(&self, rb: f64) -> Result<Self> {
        if !(rb.is_finite() && rb > 0.0) {
            return Err(Error::InvalidParams("relative bandwidth must be positive"));
        }
        Self::new(self.n_pulses, self.n_freqs, self.freq_step, self.synthetic_bandwidth() / rb, self.pri)
    }
}

/// How the per-pulse Doppler scale `xi_n` enters the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum DopplerMode {
    /// `xi_n = 1 + C_n * freq_step / carrier`.
    Exact,
    /// `xi_n = 1`; the Doppler shift is the same on every carrier.
    Simplified,
}

impl DopplerMode {
    /// Per-pulse excess `xi_n - 1` for the given codes.
    pub fn doppler_excess(self, params: &RadarParams, code: usize) -> f64 {
        match self {
            DopplerMode::Exact => code as f64 * params.freq_step / params.carrier,
            DopplerMode::Simplified => 0.0,
        }
    }
}

/// Noise power for a unit-power scatterer at the given SNR in dB.
pub fn snr_to_noise_power(snr_db: f64) -> f64 {
    num_traits::Float::powf(10.0_f64, -snr_db / 10.0)
}
