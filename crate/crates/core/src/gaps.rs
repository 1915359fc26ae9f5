//! Gaps to the best arm.

use alloc::vec::Vec;

use crate::instance::{BanditInstance, ModelError};

/// Gaps `Δ_2 ≤ … ≤ Δ_n` of the non-best arms, ordered by descending mean,
/// together with the position of the best arm in the original instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    gaps: Vec<f64>,
    best_index: usize,
}

impl GapProfile {
    /// Validate raw means and compute their gaps.
    pub fn from_means(means: &[f64]) -> Result<Self, ModelError> {
        let instance = BanditInstance::new(means.to_vec())?;
        Ok(instance.gap_profile())
    }

    /// Build from gaps directly. Gaps must be positive and finite; they are sorted.
    pub fn from_gaps(mut gaps: Vec<f64>) -> Result<Self, ModelError> {
        if gaps.is_empty() {
            return Err(ModelError::TooFewArms(1));
        }
        if let Some(&g) = gaps.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
            return Err(ModelError::NonPositiveGap(g));
        }
        gaps.sort_by(f64::total_cmp);
        Ok(Self { gaps, best_index: 0 })
    }

    pub(crate) fn from_valid_means(means: &[f64], best_index: usize) -> Self {
        let top = means[best_index];
        let mut rest: Vec<f64> = means
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != best_index)
            .map(|(_, &m)| m)
            .collect();
        rest.sort_by(|a, b| b.total_cmp(a));
        let gaps = rest.into_iter().map(|m| top - m).collect();
        Self { gaps, best_index }
    }

    /// Gaps for ranks 2..=n, non-decreasing.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn best_index(&self) -> usize {
        self.best_index
    }

    /// Number of arms including the best one.
    pub fn n_arms(&self) -> usize {
        self.gaps.len() + 1
    }

    /// `Δ_2`, the smallest gap.
    pub fn min_gap(&self) -> f64 {
        self.gaps[0]
    }

    /// `Σ Δ_i^{-2}`.
    pub fn hardness(&self) -> f64 {
        self.gaps.iter().map(|g| 1.0 / (g * g)).sum()
    }
}

pub fn gap_profile(instance: &BanditInstance) -> GapProfile {
    instance.gap_profile()
}
