//! Support-recovery metrics.

use alloc::collections::BTreeSet;

use crate::{Error, Result};

/// 1 when the recovered support equals the truth, 0 otherwise.
pub fn exact_recovery_metric(estimated: &BTreeSet<usize>, truth: &BTreeSet<usize>) -> u8 {
    u8::from(estimated == truth)
}

/// Fraction of true nonzero entries present in the estimate.
pub fn hit_rate_metric(estimated: &BTreeSet<usize>, truth: &BTreeSet<usize>) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::EmptyTruth);
    }
    Ok(estimated.intersection(truth).count() as f64 / truth.len() as f64)
}
