//! Random frequency codes.

use alloc::vec::Vec;
use rand::Rng;

use crate::params::RadarParams;
use crate::rng::{stream_rng, Stream};
use crate::{Error, Result};
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// The per-pulse frequency codes `C_n`, each in `0..n_freqs`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FrequencyCodes {
    codes: Vec<usize>,
    n_freqs: usize,
    /// Seed the codes were drawn from, `None` for user-supplied codes.
    seed: Option<u64>,
}

impl FrequencyCodes {
    /// Wraps explicit codes, checking that each lies in `0..n_freqs`.
    pub fn from_codes(codes: Vec<usize>, n_freqs: usize) -> Result<Self> {
        if n_freqs == 0 {
            return Err(Error::InvalidParams("frequency count M must be at least 1"));
        }
        if let Some((pulse, &code)) = codes.iter().enumerate().find(|(_, &c)| c >= n_freqs) {
            return Err(Error::CodeOutOfRange { pulse, code, n_freqs });
        }
        Ok(Self { codes, n_freqs, seed: None })
    }

    pub fn codes(&self) -> &[usize] {
        &self.codes
    }

    pub fn n_pulses(&self) -> usize {
        self.codes.len()
    }

    pub fn n_freqs(&self) -> usize {
        self.n_freqs
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Checks that these codes fit `params` (length N, alphabet M).
    pub fn check_against(&self, params: &RadarParams) -> Result<()> {
        if self.codes.len() != params.n_pulses {
            return Err(Error::DimensionMismatch { expected: params.n_pulses, actual: self.codes.len() });
        }
        if self.n_freqs != params.n_freqs {
            return Err(Error::DimensionMismatch { expected: params.n_freqs, actual: self.n_freqs });
        }
        Ok(())
    }

    /// Number of pulses using each code value.
    pub fn histogram(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.n_freqs];
        for &c in &self.codes {
            counts[c] += 1;
        }
        counts
    }
}

/// Draws N codes i.i.d. uniform over `0..M` from the codes stream of `seed`.
pub fn draw_codes(params: &RadarParams, seed: u64) -> FrequencyCodes {
    let mut rng = stream_rng(seed, Stream::Codes);
    let m = params.n_freqs;
    let codes = (0..params.n_pulses).map(|_| rng.random_range(0..m)).collect();
    FrequencyCodes { codes, n_freqs: m, seed: Some(seed) }
}
