//! Exponential-gap elimination and its entropy-aware budget schedules.
//!
//! Round `r` targets gap `Δ_r = 2^-r`:
//!
//! 1. pick a reference arm with median elimination at accuracy `Δ_r/4` and
//!    confidence `δ_r/2`;
//! 2. pull every alive arm `ceil(c Δ_r^-2 ln(2/δ_r))` times (`c = 32` by default);
//! 3. drop every arm whose empirical mean is at least `Δ_r/2` below the
//!    reference arm's.
//!
//! With `c = 32` each empirical mean strays by more than `Δ_r/4` (one side)
//! with probability at most `δ_r/2`, so the best arm survives round `r`
//! with probability at least `1 - δ_r` whatever reference was chosen. The
//! run is δ-correct as soon as `Σ_r δ_r ≤ δ`; the three schedules differ
//! only in how they split `δ`.

use alloc::vec::Vec;

use super::allocation::{fixed_quadratic_delta, optimal_allocation};
use super::median::{as_count, median_among};
use super::{check_delta, AlgoError, AlgorithmParams, BaiResult, Halt, RoundTrace};
use crate::entropy::decompose;
use crate::instance::BanditInstance;
use crate::sampling::SampleOracle;

/// What a schedule may look at when it picks `δ_r`.
pub(crate) struct RoundView<'a> {
    pub target_gap: f64,
    pub alive: &'a [usize],
    /// Per-arm empirical means from the previous round, if there was one.
    pub last_means: Option<&'a [f64]>,
}

pub(crate) trait RoundBudget {
    fn delta_for_round(&mut self, round: u32, view: &RoundView<'_>) -> f64;

    fn heuristic(&self) -> bool {
        false
    }
}

struct FixedQuadratic {
    delta: f64,
}

impl RoundBudget for FixedQuadratic {
    fn delta_for_round(&mut self, round: u32, _: &RoundView<'_>) -> f64 {
        fixed_quadratic_delta(self.delta, round)
    }
}

/// Per-round budgets computed from the true group weights.
///
/// Every round without a nonempty group gets the floor `δ / (2 R²)`; these
/// floors add up to less than `δ / 2`. Whatever the floors leave of `δ` is
/// split across the remaining rounds in proportion to their group weights.
/// Groups with `k ≤ 0` (gaps of at least 1) are charged to round 1.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSchedule {
    deltas: Vec<f64>,
}

impl OracleSchedule {
    pub fn new(truth: &BanditInstance, delta: f64, max_rounds: u32) -> Result<Self, AlgoError> {
        check_delta(delta)?;
        let decomposition = decompose(&truth.gap_profile());
        let floor = delta / (2.0 * f64::from(max_rounds) * f64::from(max_rounds));
        let mut weights = alloc::vec![0.0; max_rounds as usize];
        for g in decomposition.groups() {
            let round = g.k.max(1) as usize;
            if round <= max_rounds as usize {
                weights[round - 1] += g.weight;
            }
        }
        let nonempty: Vec<f64> = weights.iter().copied().filter(|&w| w > 0.0).collect();
        let mut deltas = alloc::vec![floor; max_rounds as usize];
        if !nonempty.is_empty() {
            let reserved = (f64::from(max_rounds) - nonempty.len() as f64) * floor;
            let plan = optimal_allocation(&nonempty, delta - reserved)?;
            let mut it = plan.deltas.into_iter();
            for (d, &w) in deltas.iter_mut().zip(&weights) {
                if w > 0.0 {
                    *d = it.next().unwrap_or(floor);
                }
            }
        }
        Ok(Self { deltas })
    }

    /// `δ_r` for rounds `1..=max_rounds`.
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }
}

impl RoundBudget for OracleSchedule {
    fn delta_for_round(&mut self, round: u32, _: &RoundView<'_>) -> f64 {
        self.deltas[round as usize - 1]
    }
}

/// Heuristic schedule that never sees the instance.
///
/// Each round spends at most half of the budget still unspent, so the
/// total stays below `δ` however many rounds run. The share it spends is
/// the estimated weight of the arms the round should remove, relative to
/// all surviving arms. Gaps are estimated from the previous round's means
/// relative to the empirical leader; arms with estimated gap at least
/// `Δ_r/2` count towards round `r`, the rest are floored at `Δ_r/4`.
/// Round 1 has no estimates and takes half the budget. Shares are floored
/// at `1/R`.
struct AdaptiveSchedule {
    remaining: f64,
    min_share: f64,
}

impl AdaptiveSchedule {
    fn share(view: &RoundView<'_>) -> f64 {
        let Some(means) = view.last_means else {
            return 1.0;
        };
        let top = view.alive.iter().map(|&a| means[a]).fold(f64::NEG_INFINITY, f64::max);
        let (mut current, mut later) = (0.0, 0.0);
        for &a in view.alive {
            let gap = top - means[a];
            if gap <= 0.0 {
                continue;
            }
            if gap >= view.target_gap / 2.0 {
                current += 1.0 / (gap * gap);
            } else {
                let g = gap.max(view.target_gap / 4.0);
                later += 1.0 / (g * g);
            }
        }
        if current + later > 0.0 {
            current / (current + later)
        } else {
            1.0
        }
    }
}

impl RoundBudget for AdaptiveSchedule {
    fn delta_for_round(&mut self, _: u32, view: &RoundView<'_>) -> f64 {
        let d = 0.5 * self.remaining * Self::share(view).max(self.min_share);
        self.remaining -= d;
        d
    }

    fn heuristic(&self) -> bool {
        true
    }
}

fn elimination(
    oracle: &mut SampleOracle,
    params: &AlgorithmParams,
    budget: &mut dyn RoundBudget,
) -> Result<BaiResult, AlgoError> {
    let n = oracle.n_arms();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut means = alloc::vec![0.0; n];
    let mut rounds = Vec::new();
    let mut favourite = 0;
    let mut round = 0u32;

    let outcome: Result<(), Halt> = (|| {
        while alive.len() > 1 {
            if round == params.max_rounds {
                return Err(Halt::Budget);
            }
            round += 1;
            let gap = libm::ldexp(1.0, -(round as i32));
            let view = RoundView {
                target_gap: gap,
                alive: &alive,
                last_means: (round > 1).then_some(&means[..]),
            };
            let dr = budget.delta_for_round(round, &view);
            let before = oracle.total_pulls();

            let reference = median_among(oracle, &alive, gap / 4.0, dr / 2.0)?.arm;
            favourite = reference;
            let t = as_count(libm::ceil(
                params.pull_constant / (gap * gap) * libm::log(2.0 / dr),
            ))?;
            for &a in &alive {
                means[a] = oracle.pull_mean(a, t)?;
            }
            let threshold = means[reference] - gap / 2.0;
            let alive_before = alive.len();
            alive.retain(|&a| a == reference || means[a] > threshold);
            rounds.push(RoundTrace {
                round,
                target_gap: gap,
                delta: dr,
                alive_before,
                alive_after: alive.len(),
                samples: oracle.total_pulls() - before,
                survivors: alive.clone(),
            });
        }
        Ok(())
    })();

    let aborted = match outcome {
        Ok(()) => {
            favourite = alive[0];
            false
        }
        Err(Halt::Budget) => true,
        Err(Halt::Failed(e)) => return Err(e),
    };
    Ok(BaiResult {
        selected: favourite,
        total_samples: oracle.total_pulls(),
        rounds,
        aborted,
        heuristic: budget.heuristic(),
    })
}

/// Elimination with `δ_r = 6δ / (π² r²)`.
pub fn exp_gap_elimination(
    oracle: &mut SampleOracle,
    delta: f64,
    params: &AlgorithmParams,
) -> Result<BaiResult, AlgoError> {
    check_delta(delta)?;
    elimination(oracle, params, &mut FixedQuadratic { delta })
}

/// Elimination with budgets proportional to the true group weights of `truth`.
pub fn entropy_elim_oracle(
    oracle: &mut SampleOracle,
    truth: &BanditInstance,
    delta: f64,
    params: &AlgorithmParams,
) -> Result<BaiResult, AlgoError> {
    check_delta(delta)?;
    if truth.n_arms() != oracle.n_arms() {
        return Err(AlgoError::TruthMismatch { expected: oracle.n_arms(), got: truth.n_arms() });
    }
    let mut schedule = OracleSchedule::new(truth, delta, params.max_rounds)?;
    elimination(oracle, params, &mut schedule)
}

/// Elimination with budgets from estimated group weights (heuristic).
pub fn entropy_elim_adaptive(
    oracle: &mut SampleOracle,
    delta: f64,
    params: &AlgorithmParams,
) -> Result<BaiResult, AlgoError> {
    check_delta(delta)?;
    let mut schedule = AdaptiveSchedule {
        remaining: delta,
        min_share: 1.0 / f64::from(params.max_rounds),
    };
    elimination(oracle, params, &mut schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{apply_permutation, gen_clustered, gen_max_entropy, gen_two_arm};

    fn p() -> AlgorithmParams {
        AlgorithmParams::default()
    }

    fn check_trace(r: &BaiResult, delta: f64, n: usize) {
        assert!(r.delta_spent() <= delta, "{} > {delta}", r.delta_spent());
        let mut prev = n;
        for t in &r.rounds {
            assert_eq!(t.alive_before, prev);
            assert!(t.alive_after <= t.alive_before);
            assert_eq!(t.alive_after, t.survivors.len());
            prev = t.alive_after;
        }
        if !r.aborted {
            assert_eq!(r.rounds.last().unwrap().survivors, alloc::vec![r.selected]);
        }
        assert_eq!(r.rounds.iter().map(|t| t.samples).sum::<u64>(), r.total_samples);
    }

    #[test]
    fn two_arm_error_rate() {
        let inst = gen_two_arm(0.5).unwrap();
        let mut errors = 0;
        for s in 0..1000 {
            let mut o = SampleOracle::new(&inst, s);
            let r = exp_gap_elimination(&mut o, 0.1, &p()).unwrap();
            check_trace(&r, 0.1, 2);
            assert_eq!(r.total_samples, o.total_pulls());
            errors += usize::from(r.selected != 0);
        }
        assert!(errors <= 100, "{errors}");
    }

    #[test]
    fn gap_halving_costs_about_four_times() {
        let mean = |gap: f64| {
            let inst = gen_two_arm(gap).unwrap();
            (0..500)
                .map(|s| exp_gap_elimination(&mut SampleOracle::new(&inst, s), 0.1, &p()).unwrap().total_samples)
                .sum::<u64>() as f64
                / 500.0
        };
        let ratio = mean(0.25) / mean(0.5);
        assert!((2.5..=6.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn oracle_schedule_matches_group_weights() {
        let inst = gen_max_entropy(3).unwrap();
        let s = OracleSchedule::new(&inst, 0.06, MAX).unwrap();
        let floor = 0.06 / (2.0 * 64.0 * 64.0);
        let share = (0.06 - 61.0 * floor) / 3.0;
        for r in 0..3 {
            assert!((s.deltas()[r] - share).abs() < 1e-15);
        }
        assert!(s.deltas()[3..].iter().all(|&d| d == floor));
        assert!(s.deltas().iter().sum::<f64>() <= 0.06 * (1.0 + 1e-12));
    }

    const MAX: u32 = crate::algorithms::MAX_ROUNDS;

    #[test]
    fn clustered_schedule_puts_pool_in_one_round() {
        let inst = gen_clustered(&[31], &[0.25], 1.0).unwrap();
        let s = OracleSchedule::new(&inst, 0.05, MAX).unwrap();
        assert!((s.deltas()[1] - 0.05 * (1.0 - 63.0 / 8192.0)).abs() < 1e-15);
        assert!(s.deltas()[1] > 0.99 * 0.05);
        assert!(s.deltas().iter().enumerate().all(|(i, &d)| i == 1 || d < 1e-5));
        assert!(s.deltas().iter().sum::<f64>() <= 0.05 * (1.0 + 1e-12));
    }

    #[test]
    fn large_gaps_are_charged_to_round_one() {
        let inst = crate::instance::BanditInstance::new(alloc::vec![3.0, 0.0, 2.5]).unwrap();
        let s = OracleSchedule::new(&inst, 0.1, MAX).unwrap();
        assert!((s.deltas()[0] - 0.1 * (1.0 - 63.0 / 8192.0)).abs() < 1e-15);
    }

    #[test]
    fn truth_mismatch() {
        let inst = gen_two_arm(0.5).unwrap();
        let other = gen_max_entropy(2).unwrap();
        let mut o = SampleOracle::new(&inst, 0);
        assert_eq!(
            entropy_elim_oracle(&mut o, &other, 0.1, &p()),
            Err(AlgoError::TruthMismatch { expected: 2, got: 6 })
        );
    }

    #[test]
    fn huge_gap_finishes_in_round_one() {
        let inst = gen_two_arm(100.0).unwrap();
        let r = exp_gap_elimination(&mut SampleOracle::new(&inst, 3), 0.1, &p()).unwrap();
        assert_eq!(r.rounds.len(), 1);
        assert_eq!(r.selected, 0);
    }

    #[test]
    fn schedules_respect_union_bound_and_keep_best() {
        for m in 1..=3 {
            let base = gen_max_entropy(m).unwrap();
            for s in 0..30 {
                let inst = apply_permutation(&base, s);
                let best = inst.best_arm();
                let runs = [
                    exp_gap_elimination(&mut SampleOracle::new(&inst, s), 0.05, &p()).unwrap(),
                    entropy_elim_oracle(&mut SampleOracle::new(&inst, s), &inst, 0.05, &p()).unwrap(),
                    entropy_elim_adaptive(&mut SampleOracle::new(&inst, s), 0.05, &p()).unwrap(),
                ];
                for r in &runs {
                    check_trace(r, 0.05, inst.n_arms());
                    assert!(r.kept_alive(best));
                }
                assert!(runs[2].heuristic && !runs[0].heuristic);
            }
        }
    }

    #[test]
    fn deterministic() {
        let inst = gen_max_entropy(3).unwrap();
        let a = entropy_elim_adaptive(&mut SampleOracle::new(&inst, 9), 0.05, &p()).unwrap();
        let b = entropy_elim_adaptive(&mut SampleOracle::new(&inst, 9), 0.05, &p()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_and_round_caps_abort() {
        let inst = gen_two_arm(0.5).unwrap();
        let mut o = SampleOracle::new(&inst, 0).with_budget_cap(Some(1000));
        let r = exp_gap_elimination(&mut o, 0.1, &p()).unwrap();
        assert!(r.aborted);
        assert_eq!(r.total_samples, o.total_pulls());

        let tiny = gen_two_arm(1e-6).unwrap();
        let params = AlgorithmParams { max_rounds: 2, ..p() };
        let r = exp_gap_elimination(&mut SampleOracle::new(&tiny, 0), 0.1, &params).unwrap();
        assert!(r.aborted);
        assert_eq!(r.rounds.len(), 2);
    }
}
