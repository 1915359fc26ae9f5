//! Bandit instances with unit-variance Gaussian arms.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::gaps::GapProfile;

/// Reward variance of every arm. Instances with any other variance are rejected.
pub const UNIT_VARIANCE: f64 = 1.0;

/// Errors raised while building or analysing an instance.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("an instance needs at least 2 arms, got {0}")]
    TooFewArms(usize),
    #[error("the largest mean {mean} is attained by arms {first} and {second}; the best arm must be unique")]
    NonUniqueMaximum { mean: f64, first: usize, second: usize },
    #[error("arm {arm} has non-finite mean {mean}")]
    NonFiniteMean { arm: usize, mean: f64 },
    #[error("reward variance must be 1.0, got {0}")]
    InvalidVariance(f64),
    #[error("confidence parameter must lie in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("gaps must be positive and finite, got {0}")]
    NonPositiveGap(f64),
    #[error("{what}: expected {expected} entries, got {got}")]
    LengthMismatch { what: &'static str, expected: usize, got: usize },
    #[error("invalid gap range [{lo}, {hi}]; need 0 < lo <= hi <= 1")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("group count {0} outside supported range 1..={max}", max = crate::generators::MAX_ENTROPY_GROUPS)]
    GroupCountOutOfRange(u32),
}

/// An ordered list of arm means. Arm `i` yields `Normal(means[i], 1)` rewards.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    means: Vec<f64>,
    name: Option<String>,
    best: usize,
}

impl BanditInstance {
    /// Validate `means` and build an unnamed instance.
    pub fn new(means: Vec<f64>) -> Result<Self, ModelError> {
        if means.len() < 2 {
            return Err(ModelError::TooFewArms(means.len()));
        }
        if let Some((arm, &mean)) = means.iter().enumerate().find(|(_, m)| !m.is_finite()) {
            return Err(ModelError::NonFiniteMean { arm, mean });
        }
        let mut best = 0;
        for (i, &m) in means.iter().enumerate().skip(1) {
            if m > means[best] {
                best = i;
            }
        }
        if let Some(second) = means
            .iter()
            .enumerate()
            .position(|(i, &m)| i != best && m == means[best])
        {
            let (first, second) = if second < best { (second, best) } else { (best, second) };
            return Err(ModelError::NonUniqueMaximum { mean: means[best], first, second });
        }
        Ok(Self { means, name: None, best })
    }

    /// Build from the fields of the on-disk schema, rejecting non-unit variance.
    pub fn from_parts(
        means: Vec<f64>,
        variance: f64,
        name: Option<String>,
    ) -> Result<Self, ModelError> {
        if variance != UNIT_VARIANCE {
            return Err(ModelError::InvalidVariance(variance));
        }
        let mut instance = Self::new(means)?;
        instance.name = name;
        Ok(instance)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn n_arms(&self) -> usize {
        self.means.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn variance(&self) -> f64 {
        UNIT_VARIANCE
    }

    /// Index of the unique arm with the largest mean.
    pub fn best_arm(&self) -> usize {
        self.best
    }

    pub fn gap_profile(&self) -> GapProfile {
        GapProfile::from_valid_means(&self.means, self.best)
    }

    /// The same instance with `offset` added to every mean.
    pub fn shifted(&self, offset: f64) -> Result<Self, ModelError> {
        let mut shifted = Self::new(self.means.iter().map(|m| m + offset).collect())?;
        shifted.name = self.name.clone();
        Ok(shifted)
    }

    /// The instance whose arm `j` is arm `order[j]` of `self`.
    ///
    /// Panics if `order` is not a permutation of `0..n`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.means.len(), "permutation length mismatch");
        let mut seen = alloc::vec![false; order.len()];
        for &i in order {
            assert!(!core::mem::replace(&mut seen[i], true), "index {i} repeated");
        }
        let means: Vec<f64> = order.iter().map(|&i| self.means[i]).collect();
        let best = order.iter().position(|&i| i == self.best).unwrap_or(0);
        Self { means, name: self.name.clone(), best }
    }
}
