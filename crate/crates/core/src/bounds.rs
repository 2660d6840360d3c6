//! Probability bounds on the block coherences and the recovery-guarantee
//! conditions that consume them.
//!
//! All logarithms are natural.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result};
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Tail query for one Gram-block singular value: `P(sigma > sqrt((M-1)/N) + epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct TailBoundQuery {
    pub m_freqs: usize,
    pub n_pulses: usize,
    pub epsilon: f64,
}

impl TailBoundQuery {
    /// The singular-value level the query asks about.
    pub fn threshold(&self) -> f64 {
        ((self.m_freqs as f64 - 1.0) / self.n_pulses as f64).sqrt() + self.epsilon
    }
}

/// `exp(-N epsilon^2 / (4 (M - 1)))`, valid for `0 < epsilon <= 1`, `M >= 2`.
pub fn tail_bound(query: &TailBoundQuery) -> Result<f64> {
    let TailBoundQuery { m_freqs, n_pulses, epsilon } = *query;
    if m_freqs < 2 {
        return Err(Error::InvalidBoundArgument("tail bound needs M >= 2"));
    }
    if n_pulses == 0 {
        return Err(Error::InvalidBoundArgument("tail bound needs N >= 1"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidBoundArgument("epsilon must lie in (0, 1]"));
    }
    Ok((-(n_pulses as f64) * epsilon * epsilon / (4.0 * (m_freqs as f64 - 1.0))).exp())
}

/// A probability bound clamped to `[0, 1]`, with the unclamped value kept.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ProbabilityBound {
    pub value: f64,
    pub raw: f64,
    /// The threshold sits below `sqrt((M-1)/N)`, where the bound says nothing.
    pub vacuous: bool,
}

fn union_tail_bound(c: f64, prefactor: f64, m: usize, n: usize) -> Result<ProbabilityBound> {
    if c.is_nan() || c < 0.0 {
        return Err(Error::InvalidBoundArgument("coherence threshold must be non-negative"));
    }
    if m < 2 {
        return Err(Error::InvalidBoundArgument("coherence bounds need M >= 2"));
    }
    if n == 0 {
        return Err(Error::InvalidBoundArgument("coherence bounds need N >= 1"));
    }
    let mm1 = m as f64 - 1.0;
    let excess = (n as f64).sqrt() * c - mm1.sqrt();
    if excess < 0.0 {
        return Ok(ProbabilityBound { value: prefactor.min(1.0), raw: prefactor.min(1.0), vacuous: true });
    }
    let raw = prefactor * (-excess * excess / (4.0 * mm1)).exp();
    Ok(ProbabilityBound { value: raw.min(1.0), raw, vacuous: false })
}

/// Union bound on `P(mu_I > c1)` with prefactor M.
pub fn mu_intra_ccdf_bound(c1: f64, m: usize, n: usize) -> Result<ProbabilityBound> {
    union_tail_bound(c1, m as f64, m, n)
}

/// Union bound on `P(mu_B > c2)` with prefactor `M * floor(N/2)`.
pub fn mu_inter_ccdf_bound(c2: f64, m: usize, n: usize) -> Result<ProbabilityBound> {
    union_tail_bound(c2, (m * (n / 2)) as f64, m, n)
}

/// Inputs of the block-incoherence condition.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GuaranteeInputs {
    pub mu_intra: f64,
    pub mu_inter: f64,
    pub spectral_norm: f64,
    pub block_sparsity: usize,
    pub m_freqs: usize,
    pub n_pulses: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct IncoherenceCondition {
    /// Left-hand side; the condition holds when it is at most 1/4.
    pub lhs: f64,
    pub satisfied: bool,
}

/// Evaluates
/// `17 sqrt(K log(MN) (1 + mu_I) / N) ||Psi||_s + 48 mu_B log(MN)
///  + (2K/N) ||Psi||_s^2 + 3 mu_I <= 1/4`.
pub fn theorem1_condition(inputs: &GuaranteeInputs) -> Result<IncoherenceCondition> {
    let GuaranteeInputs { mu_intra, mu_inter, spectral_norm, block_sparsity, m_freqs, n_pulses } = *inputs;
    if m_freqs * n_pulses < 2 {
        return Err(Error::InvalidBoundArgument("condition needs M * N >= 2"));
    }
    if !(mu_intra >= 0.0 && mu_inter >= 0.0 && spectral_norm >= 0.0) {
        return Err(Error::InvalidBoundArgument("coherences and spectral norm must be non-negative"));
    }
    if block_sparsity > n_pulses {
        return Err(Error::InvalidBoundArgument("block sparsity cannot exceed N"));
    }
    let n = n_pulses as f64;
    let k = block_sparsity as f64;
    let log_mn = ((m_freqs * n_pulses) as f64).ln();
    let lhs = 17.0 * (k * log_mn * (1.0 + mu_intra) / n).sqrt() * spectral_norm
        + 48.0 * mu_inter * log_mn
        + 2.0 * k / n * spectral_norm * spectral_norm
        + 3.0 * mu_intra;
    Ok(IncoherenceCondition { lhs, satisfied: lhs <= 0.25 })
}

/// `1 - 4 (MN)^(-4 log 2)`, the success probability attached to the condition
/// over random block supports.
pub fn condition_success_probability(m: usize, n: usize) -> f64 {
    1.0 - 4.0 * ((m * n) as f64).powf(-4.0 * 2f64.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SparsityBound {
    /// Largest guaranteed block sparsity, `floor` of `raw`.
    pub k_max: u64,
    pub delta1: f64,
    pub delta2: f64,
    /// Unfloored bound, zero when vacuous.
    pub raw: f64,
    /// `1/8 - delta1 - delta2 <= 0`: no guarantee at this size.
    pub vacuous: bool,
}

/// Block sparsity under which the incoherence condition holds with
/// probability at least `1 - epsilon`:
/// `K <= N (1/8 - d1 - d2)^2 / (81 M log(MN) (1 + 2 d2 / 3))`.
pub fn theorem3_sparsity_bound(m: usize, n: usize, epsilon: f64) -> Result<SparsityBound> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidBoundArgument("epsilon must lie in (0, 1)"));
    }
    if m == 0 || n == 0 || m * n < 2 {
        return Err(Error::InvalidBoundArgument("bound needs M * N >= 2"));
    }
    let (mf, nf) = (m as f64, n as f64);
    let log_mn = (mf * nf).ln();
    let ratio = ((mf - 1.0) / nf).sqrt();
    let delta1 = 24.0 * ratio * log_mn * (2.0 * (log_mn - epsilon.ln()).sqrt() + 1.0);
    let delta2 = 1.5 * ratio * (2.0 * ((2.0 * mf).ln() - epsilon.ln()).sqrt() + 1.0);
    let margin = 0.125 - delta1 - delta2;
    if margin <= 0.0 {
        return Ok(SparsityBound { k_max: 0, delta1, delta2, raw: 0.0, vacuous: true });
    }
    let raw = nf * margin * margin / (81.0 * mf * log_mn * (1.0 + 2.0 * delta2 / 3.0));
    Ok(SparsityBound { k_max: raw.floor() as u64, delta1, delta2, raw, vacuous: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bound_arithmetic() {
        let b = tail_bound(&TailBoundQuery { m_freqs: 2, n_pulses: 16, epsilon: 1.0 }).unwrap();
        assert!((b - (-4.0f64).exp()).abs() < 1e-15);
        assert!((b - 0.018316).abs() < 1e-6);
        let tiny = tail_bound(&TailBoundQuery { m_freqs: 4, n_pulses: 32, epsilon: 1e-9 }).unwrap();
        assert!((tiny - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_rejects_bad_queries() {
        assert!(tail_bound(&TailBoundQuery { m_freqs: 2, n_pulses: 16, epsilon: 1.5 }).is_err());
        assert!(tail_bound(&TailBoundQuery { m_freqs: 1, n_pulses: 16, epsilon: 0.5 }).is_err());
        assert!(tail_bound(&TailBoundQuery { m_freqs: 3, n_pulses: 16, epsilon: 0.0 }).is_err());
    }

    #[test]
    fn tail_bound_monotonicity() {
        let at = |m, n, e| tail_bound(&TailBoundQuery { m_freqs: m, n_pulses: n, epsilon: e }).unwrap();
        for m in 2..6 {
            for n in [8, 16, 32, 64] {
                for e in [0.1, 0.3, 0.5, 0.9] {
                    assert!(at(m, n, e + 0.05) < at(m, n, e));
                    assert!(at(m, 2 * n, e) < at(m, n, e));
                    assert!(at(m + 1, n, e) > at(m, n, e));
                }
            }
        }
    }

    #[test]
    fn coherence_bounds_clamp_at_the_floor() {
        // c1 = sqrt((M-1)/N) zeroes the exponent, leaving the prefactor M
        let c1 = (3.0f64 / 32.0).sqrt();
        let b = mu_intra_ccdf_bound(c1, 4, 32).unwrap();
        assert_eq!(b.value, 1.0);
        assert!((b.raw - 4.0).abs() < 1e-12);
        // 4 exp(-(sqrt 32 - sqrt 3)^2 / 12) = 1.10807...
        let b = mu_intra_ccdf_bound(1.0, 4, 32).unwrap();
        assert_eq!(b.value, 1.0);
        assert!((b.raw - 1.108_071_2).abs() < 1e-5, "{}", b.raw);
        assert!(mu_intra_ccdf_bound(-0.1, 4, 32).is_err());
        assert!(mu_intra_ccdf_bound(0.01, 4, 32).unwrap().vacuous);
    }

    #[test]
    fn inter_block_bound_scales_prefactor() {
        assert_eq!(mu_inter_ccdf_bound(0.5, 4, 1).unwrap().value, 0.0);
        for c in [0.6, 0.8, 1.0, 1.2] {
            let intra = mu_intra_ccdf_bound(c, 4, 32).unwrap().raw;
            let inter = mu_inter_ccdf_bound(c, 4, 32).unwrap().raw;
            assert!((inter - 16.0 * intra).abs() < 1e-12 * inter);
        }
    }

    #[test]
    fn incoherence_condition() {
        let zero = GuaranteeInputs {
            mu_intra: 0.0,
            mu_inter: 0.0,
            spectral_norm: 2.0,
            block_sparsity: 0,
            m_freqs: 4,
            n_pulses: 32,
        };
        let r = theorem1_condition(&zero).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.satisfied);
        let bad = GuaranteeInputs { mu_intra: 1.0, ..zero };
        let r = theorem1_condition(&bad).unwrap();
        assert!(r.lhs >= 3.0 && !r.satisfied);
        // independently evaluated: 17 sqrt(ln 4096 * 1.02 / 1024) * 2 + 48 * 0.02 * ln 4096
        //   + 2/1024 * 4 + 0.06 = 11.1476665...
        let mid = GuaranteeInputs {
            mu_intra: 0.02,
            mu_inter: 0.02,
            spectral_norm: 2.0,
            block_sparsity: 1,
            m_freqs: 4,
            n_pulses: 1024,
        };
        let r = theorem1_condition(&mid).unwrap();
        assert!((r.lhs - 11.147_666_5).abs() < 1e-6, "{}", r.lhs);
    }

    #[test]
    fn sparsity_bound_is_vacuous_at_desk_scale() {
        let b = theorem3_sparsity_bound(4, 128, 0.1).unwrap();
        assert!(b.vacuous);
        assert_eq!(b.k_max, 0);
        assert!((b.delta1 - 156.893_955).abs() < 1e-5, "{}", b.delta1);
        assert!((b.delta2 - 1.191_062).abs() < 1e-5, "{}", b.delta2);
    }

    #[test]
    fn sparsity_bound_at_large_n() {
        // delta1 = 0.16926 > 1/8 at N = 2^30; the guarantee starts between 2^30 and 2^32
        assert!(theorem3_sparsity_bound(2, 1 << 30, 0.1).unwrap().vacuous);
        let b = theorem3_sparsity_bound(2, 1 << 32, 0.1).unwrap();
        assert!(!b.vacuous);
        assert_eq!(b.k_max, 1220);
    }

    #[test]
    fn sparsity_bound_nondecreasing_in_n() {
        for m in [2, 4, 8] {
            let mut last = 0;
            for e in 10..48 {
                let k = theorem3_sparsity_bound(m, 1usize << e, 0.1).unwrap().k_max;
                assert!(k >= last);
                last = k;
            }
        }
    }

    #[test]
    fn sparsity_bound_rejects_bad_epsilon() {
        assert!(theorem3_sparsity_bound(2, 64, 0.0).is_err());
        assert!(theorem3_sparsity_bound(2, 64, 1.0).is_err());
    }
}
