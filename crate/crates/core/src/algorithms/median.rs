//! Median elimination: an `(ε, δ)`-PAC arm in `O(n ε^-2 ln(1/δ))` samples.
//!
//! Inner round `l` samples every surviving arm
//! `ceil(8 ε_l^-2 ln(3/δ_l))` times, which for unit-variance Gaussians keeps
//! each empirical mean within `ε_l / 2` of the truth with probability at
//! least `1 - δ_l / 3`, then drops the lower half. The schedule starts at
//! `ε_1 = ε/4`, `δ_1 = δ/2` and continues with `ε_{l+1} = 3ε_l/4`,
//! `δ_{l+1} = δ_l/2`.

use alloc::vec::Vec;

use super::{check_delta, AlgoError, BaiResult, Halt, RoundTrace};
use crate::sampling::SampleOracle;

pub(crate) struct MedianOutcome {
    pub arm: usize,
    pub rounds: Vec<RoundTrace>,
}

pub(crate) fn pulls_for(epsilon: f64, delta: f64) -> f64 {
    libm::ceil(8.0 / (epsilon * epsilon) * libm::log(3.0 / delta))
}

/// Convert a real-valued pull count to an integer, treating overflow as budget exhaustion.
pub(crate) fn as_count(pulls: f64) -> Result<u64, Halt> {
    if pulls.is_finite() && pulls < 1.8e19 {
        Ok(pulls.max(1.0) as u64)
    } else {
        Err(Halt::Budget)
    }
}

/// Median elimination restricted to `arms`. Ties keep the lower arm index.
pub(crate) fn median_among(
    oracle: &mut SampleOracle,
    arms: &[usize],
    epsilon: f64,
    delta: f64,
) -> Result<MedianOutcome, Halt> {
    let mut alive: Vec<usize> = arms.to_vec();
    let mut rounds = Vec::new();
    let mut eps = epsilon / 4.0;
    let mut dl = delta / 2.0;
    let mut means = alloc::vec![0.0; oracle.n_arms()];
    let mut round = 0;
    while alive.len() > 1 {
        round += 1;
        let t = as_count(pulls_for(eps, dl))?;
        let before = oracle.total_pulls();
        for &a in &alive {
            means[a] = oracle.pull_mean(a, t)?;
        }
        let alive_before = alive.len();
        alive.sort_by(|&a, &b| means[b].total_cmp(&means[a]).then(a.cmp(&b)));
        alive.truncate(alive_before.div_ceil(2));
        alive.sort_unstable();
        rounds.push(RoundTrace {
            round,
            target_gap: eps,
            delta: dl,
            alive_before,
            alive_after: alive.len(),
            samples: oracle.total_pulls() - before,
            survivors: alive.clone(),
        });
        eps *= 0.75;
        dl *= 0.5;
    }
    Ok(MedianOutcome { arm: alive[0], rounds })
}

fn check_epsilon(epsilon: f64) -> Result<(), AlgoError> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(AlgoError::InvalidEpsilon(epsilon))
    }
}

/// An arm whose mean is within `epsilon` of the best with probability `≥ 1 - delta`.
pub fn median_elimination(
    oracle: &mut SampleOracle,
    epsilon: f64,
    delta: f64,
) -> Result<usize, AlgoError> {
    check_delta(delta)?;
    check_epsilon(epsilon)?;
    let arms: Vec<usize> = (0..oracle.n_arms()).collect();
    match median_among(oracle, &arms, epsilon, delta) {
        Ok(out) => Ok(out.arm),
        Err(Halt::Budget) => Err(AlgoError::Aborted { samples: oracle.total_pulls() }),
        Err(Halt::Failed(e)) => Err(e),
    }
}

/// Median elimination used as a best-arm strategy, with its inner rounds as the trace.
///
/// Exact whenever `epsilon` is below the smallest gap.
pub fn median_elimination_run(
    oracle: &mut SampleOracle,
    epsilon: f64,
    delta: f64,
) -> Result<BaiResult, AlgoError> {
    check_delta(delta)?;
    check_epsilon(epsilon)?;
    let arms: Vec<usize> = (0..oracle.n_arms()).collect();
    match median_among(oracle, &arms, epsilon, delta) {
        Ok(out) => Ok(BaiResult {
            selected: out.arm,
            total_samples: oracle.total_pulls(),
            rounds: out.rounds,
            aborted: false,
            heuristic: false,
        }),
        Err(Halt::Budget) => Ok(BaiResult {
            selected: 0,
            total_samples: oracle.total_pulls(),
            rounds: Vec::new(),
            aborted: true,
            heuristic: false,
        }),
        Err(Halt::Failed(e)) => Err(e),
    }
}
