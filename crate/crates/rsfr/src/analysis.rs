//! One-shot coherence reports and bound tables.

use rsfr_core::bounds::{
    condition_success_probability, theorem1_condition, theorem3_sparsity_bound, GuaranteeInputs, IncoherenceCondition,
    SparsityBound,
};
use rsfr_core::spectral::{coherence_report, CoherenceMethod, CoherenceReport};
use rsfr_core::{build_observation_matrix, draw_codes, DopplerMode, FrequencyCodes, RadarParams};
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum CodeSource {
    Seed(u64),
    Explicit(FrequencyCodes),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub params: RadarParams,
    pub mode: DopplerMode,
    pub seed: Option<u64>,
    pub codes: Vec<usize>,
    pub coherence: CoherenceReport,
    pub block_sparsity: usize,
    /// Incoherence condition evaluated at `block_sparsity`.
    pub condition: IncoherenceCondition,
    /// Probability attached to the condition over random supports.
    pub condition_probability: f64,
    pub epsilon: f64,
    pub sparsity_bound: SparsityBound,
}

/// Coherences of one code realization (closed form under the simplified
/// model, dense SVDs otherwise) with the incoherence condition at
/// `block_sparsity` and the guaranteed sparsity at failure probability
/// `epsilon`.
pub fn run_analysis(
    params: &RadarParams,
    codes: CodeSource,
    mode: DopplerMode,
    block_sparsity: usize,
    epsilon: f64,
) -> Result<AnalysisReport> {
    params.validate()?;
    let (seed, codes) = match codes {
        CodeSource::Seed(s) => (Some(s), draw_codes(params, s)),
        CodeSource::Explicit(c) => (c.seed(), c),
    };
    let matrix = build_observation_matrix(params, &codes, mode)?;
    let method = match mode {
        DopplerMode::Simplified => CoherenceMethod::ClosedForm,
        DopplerMode::Exact => CoherenceMethod::NumericSvd,
    };
    let coherence = coherence_report(&matrix, method)?;
    let (m, n) = (params.n_freqs, params.n_pulses);
    let condition = theorem1_condition(&GuaranteeInputs {
        mu_intra: coherence.mu_intra,
        mu_inter: coherence.mu_inter,
        spectral_norm: coherence.spectral_norm,
        block_sparsity,
        m_freqs: m,
        n_pulses: n,
    })?;
    Ok(AnalysisReport {
        params: *params,
        mode,
        seed,
        codes: codes.codes().to_vec(),
        coherence,
        block_sparsity,
        condition,
        condition_probability: condition_success_probability(m, n),
        epsilon,
        sparsity_bound: theorem3_sparsity_bound(m, n, epsilon)?,
    })
}

/// Coherence values at which to evaluate the incoherence condition in a
/// bound table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionQuery {
    pub mu_intra: f64,
    pub mu_inter: f64,
    /// `sqrt(M)` (the simplified-model value) when absent.
    pub spectral_norm: Option<f64>,
    pub block_sparsity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub m: usize,
    pub n: usize,
    pub epsilon: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub k_max: u64,
    pub k_raw: f64,
    pub vacuous: bool,
    pub condition_lhs: Option<f64>,
    pub condition_satisfied: Option<bool>,
}

pub fn bound_table(
    ms: &[usize],
    ns: &[usize],
    epsilons: &[f64],
    query: Option<ConditionQuery>,
) -> Result<Vec<BoundRow>> {
    let mut rows = Vec::new();
    for &m in ms {
        for &n in ns {
            for &epsilon in epsilons {
                let b = theorem3_sparsity_bound(m, n, epsilon)?;
                let cond = query
                    .map(|q| {
                        theorem1_condition(&GuaranteeInputs {
                            mu_intra: q.mu_intra,
                            mu_inter: q.mu_inter,
                            spectral_norm: q.spectral_norm.unwrap_or((m as f64).sqrt()),
                            block_sparsity: q.block_sparsity,
                            m_freqs: m,
                            n_pulses: n,
                        })
                    })
                    .transpose()?;
                rows.push(BoundRow {
                    m,
                    n,
                    epsilon,
                    delta1: b.delta1,
                    delta2: b.delta2,
                    k_max: b.k_max,
                    k_raw: b.raw,
                    vacuous: b.vacuous,
                    condition_lhs: cond.map(|c| c.lhs),
                    condition_satisfied: cond.map(|c| c.satisfied),
                });
            }
        }
    }
    Ok(rows)
}
