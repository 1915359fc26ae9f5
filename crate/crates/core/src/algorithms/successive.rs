//! Successive elimination with a uniform confidence schedule.
//!
//! Every alive arm is pulled once per round. After round `t` every arm's
//! mean carries the radius `sqrt(2 ln(2/δ_t)/t)` with
//! `δ_t = 6δ / (π² n t²)`; a union bound over arms and rounds makes all
//! intervals hold simultaneously with probability `≥ 1 - δ`. An arm is
//! dropped once its upper bound falls below the best lower bound.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{check_delta, AlgoError, BaiResult, Halt, RoundTrace};
use crate::sampling::{EmpiricalStats, SampleOracle};

pub fn uniform_se(oracle: &mut SampleOracle, delta: f64) -> Result<BaiResult, AlgoError> {
    check_delta(delta)?;
    let n = oracle.n_arms();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut stats = EmpiricalStats::new(n);
    let mut rounds = Vec::new();
    let mut t = 0u64;
    let mut last_trace_pulls = 0;

    let outcome: Result<(), Halt> = (|| {
        while alive.len() > 1 {
            t += 1;
            for &a in &alive {
                let x = oracle.pull_one(a)?;
                stats.record(a, x);
            }
            let per_arm = 6.0 * delta / (PI * PI * n as f64 * (t * t) as f64);
            let radius = libm::sqrt(2.0 * libm::log(2.0 / per_arm) / t as f64);
            let top = alive.iter().map(|&a| stats.mean(a)).fold(f64::NEG_INFINITY, f64::max);
            let alive_before = alive.len();
            alive.retain(|&a| stats.mean(a) + radius >= top - radius);
            if alive.len() < alive_before {
                rounds.push(RoundTrace {
                    round: t as u32,
                    target_gap: 2.0 * radius,
                    delta: per_arm * n as f64,
                    alive_before,
                    alive_after: alive.len(),
                    samples: oracle.total_pulls() - last_trace_pulls,
                    survivors: alive.clone(),
                });
                last_trace_pulls = oracle.total_pulls();
            }
        }
        Ok(())
    })();

    let aborted = match outcome {
        Ok(()) => false,
        Err(Halt::Budget) => true,
        Err(Halt::Failed(e)) => return Err(e),
    };
    let selected = alive
        .iter()
        .copied()
        .fold(alive[0], |best, a| if stats.mean(a) > stats.mean(best) { a } else { best });
    Ok(BaiResult { selected, total_samples: oracle.total_pulls(), rounds, aborted, heuristic: false })
}
