//! Error summaries over a run: mean relative error and L-infinity error.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSummary<F> {
    /// Mean of `|est - truth| / |truth|` over scored steps with non-zero truth,
    /// as a fraction (multiply by 100 for percent).
    pub mean_relative_error: F,
    /// Largest `|est - truth|` over scored steps.
    pub max_absolute_error: F,
    /// `|est - truth|` for each scored step.
    pub per_step_errors: Vec<F>,
    /// Steps left out of the relative mean because the truth was zero.
    pub excluded_zero_truth: usize,
}

impl<F: Scalar> ErrorSummary<F> {
    pub fn mean_relative_error_pct(&self) -> F {
        self.mean_relative_error * F::of(100.0)
    }

    pub fn scored(&self) -> usize {
        self.per_step_errors.len()
    }
}

/// Scores `estimate` against `truth`, ignoring the first `warmup_skip` entries.
pub fn compute_errors<F: Scalar>(
    truth: &[F],
    estimate: &[F],
    warmup_skip: usize,
) -> Result<ErrorSummary<F>> {
    if truth.len() != estimate.len() {
        return Err(Error::Domain(format!(
            "series lengths differ: {} truth vs {} estimates",
            truth.len(),
            estimate.len()
        )));
    }
    if warmup_skip >= truth.len() {
        return Err(Error::Domain(format!(
            "warm-up skip {} leaves nothing of {} steps to score",
            warmup_skip,
            truth.len()
        )));
    }
    let mut per_step = Vec::with_capacity(truth.len() - warmup_skip);
    let mut rel_sum = F::zero();
    let mut rel_n = 0usize;
    let mut excluded = 0usize;
    let mut max_abs = F::zero();
    for (&t, &e) in truth.iter().zip(estimate).skip(warmup_skip) {
        let abs = (e - t).abs();
        per_step.push(abs);
        max_abs = max_abs.max(abs);
        if t == F::zero() {
            excluded += 1;
        } else {
            rel_sum = rel_sum + abs / t.abs();
            rel_n += 1;
        }
    }
    let mean = if rel_n == 0 {
        F::zero()
    } else {
        rel_sum / F::of_count(rel_n as u64)
    };
    Ok(ErrorSummary {
        mean_relative_error: mean,
        max_absolute_error: max_abs,
        per_step_errors: per_step,
        excluded_zero_truth: excluded,
    })
}
