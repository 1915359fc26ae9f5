//! Fixed-confidence best-arm identification strategies.
//!
//! Every strategy talks to the instance only through a [`SampleOracle`] and
//! returns a [`BaiResult`]. Running out of pull budget (or past
//! [`MAX_ROUNDS`] elimination rounds) is not an error: the result comes back
//! with `aborted = true` so that callers can count it separately from wrong
//! answers.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::instance::BanditInstance;
use crate::sampling::{SampleError, SampleOracle};

pub mod allocation;
pub mod elimination;
pub mod lil_ucb;
pub mod median;
pub mod successive;

pub use allocation::{optimal_allocation, AllocationPlan, AllocationScheme};
pub use elimination::{entropy_elim_adaptive, entropy_elim_oracle, exp_gap_elimination};
pub use lil_ucb::{lil_ucb, LilUcbParams};
pub use median::{median_elimination, median_elimination_run};
pub use successive::uniform_se;

/// Elimination rounds stop at gap resolution `2^-64`.
pub const MAX_ROUNDS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgoError {
    #[error("confidence parameter must lie in (0, 1), got {0}")]
    InvalidDelta(f64),
    #[error("approximation parameter must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("weight {index} is {weight}; weights must be positive and finite")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("allocation needs at least one weight")]
    EmptyWeights,
    #[error("truth instance has {got} arms but the oracle has {expected}")]
    TruthMismatch { expected: usize, got: usize },
    #[error("{name} = {value} is out of range")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("pull budget exhausted after {samples} samples")]
    Aborted { samples: u64 },
    #[error(transparent)]
    Sampling(SampleError),
}

pub(crate) fn check_delta(delta: f64) -> Result<(), AlgoError> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(AlgoError::InvalidDelta(delta))
    }
}

/// Internal stop signal: budget exhaustion aborts the run, anything else is a bug upstream.
#[derive(Debug)]
pub(crate) enum Halt {
    Budget,
    Failed(AlgoError),
}

impl From<SampleError> for Halt {
    fn from(e: SampleError) -> Self {
        match e {
            SampleError::BudgetExceeded { .. } => Halt::Budget,
            other => Halt::Failed(AlgoError::Sampling(other)),
        }
    }
}

/// One round of an elimination-style algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrace {
    pub round: u32,
    /// Gap scale targeted by the round.
    pub target_gap: f64,
    /// Failure probability charged to the round.
    pub delta: f64,
    pub alive_before: usize,
    pub alive_after: usize,
    pub samples: u64,
    /// Arms still alive after the round.
    pub survivors: Vec<usize>,
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct BaiResult {
    /// Returned arm; on abort, the algorithm's current favourite.
    pub selected: usize,
    pub total_samples: u64,
    pub rounds: Vec<RoundTrace>,
    pub aborted: bool,
    /// Set when the failure budget came from a heuristic schedule.
    pub heuristic: bool,
}

impl BaiResult {
    /// `Σ_r δ_r` over the recorded rounds.
    pub fn delta_spent(&self) -> f64 {
        self.rounds.iter().map(|r| r.delta).sum()
    }

    /// Whether `arm` survived every recorded round.
    pub fn kept_alive(&self, arm: usize) -> bool {
        self.rounds.iter().all(|r| r.survivors.contains(&arm))
    }
}

/// Tunables shared by the strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgorithmParams {
    /// `c` in the per-arm elimination pull count `ceil(c Δ_r^-2 ln(2/δ_r))`.
    pub pull_constant: f64,
    pub max_rounds: u32,
    /// Accuracy used when median elimination runs as a standalone strategy.
    pub median_epsilon: f64,
    pub lil: LilUcbParams,
}

impl Default for AlgorithmParams {
    fn default() -> Self {
        Self {
            pull_constant: 32.0,
            max_rounds: MAX_ROUNDS,
            median_epsilon: 0.1,
            lil: LilUcbParams::default(),
        }
    }
}

/// Strategy names accepted on the command line and in configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    UniformSe,
    MedianElim,
    ExpGap,
    ExpGapEntropyOracle,
    ExpGapEntropyAdaptive,
    LilUcb,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::UniformSe,
        Algorithm::MedianElim,
        Algorithm::ExpGap,
        Algorithm::ExpGapEntropyOracle,
        Algorithm::ExpGapEntropyAdaptive,
        Algorithm::LilUcb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::UniformSe => "uniform-se",
            Algorithm::MedianElim => "median-elim",
            Algorithm::ExpGap => "exp-gap",
            Algorithm::ExpGapEntropyOracle => "exp-gap-entropy-oracle",
            Algorithm::ExpGapEntropyAdaptive => "exp-gap-entropy-adaptive",
            Algorithm::LilUcb => "lil-ucb",
        }
    }

    /// Run on `oracle`. `truth` is only read by the entropy-oracle variant.
    pub fn run(
        self,
        params: &AlgorithmParams,
        oracle: &mut SampleOracle,
        truth: &BanditInstance,
        delta: f64,
    ) -> Result<BaiResult, AlgoError> {
        match self {
            Algorithm::UniformSe => uniform_se(oracle, delta),
            Algorithm::MedianElim => median_elimination_run(oracle, params.median_epsilon, delta),
            Algorithm::ExpGap => exp_gap_elimination(oracle, delta, params),
            Algorithm::ExpGapEntropyOracle => entropy_elim_oracle(oracle, truth, delta, params),
            Algorithm::ExpGapEntropyAdaptive => entropy_elim_adaptive(oracle, delta, params),
            Algorithm::LilUcb => lil_ucb(oracle, delta, &params.lil),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm {0:?}")]
pub struct UnknownAlgorithm(pub alloc::string::String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| UnknownAlgorithm(s.into()))
    }
}
