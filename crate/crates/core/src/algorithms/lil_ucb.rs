//! lil'UCB: an index policy with law-of-the-iterated-logarithm confidence widths.
//!
//! Arm `i` with `t_i` pulls has index
//! `m̂_i + (1+β)(1+√ε) sqrt(2(1+ε) ln(ln((1+ε) t_i) / δ̃) / t_i)`.
//! The policy pulls the arm with the largest index (lowest index on ties)
//! and stops as soon as some arm has `t_i ≥ 1 + λ Σ_{j≠i} t_j`, returning it.
//!
//! The inner confidence `δ̃` is chosen so that the finite-time LIL union
//! bound `4√(c_ε δ̃) + 4 c_ε δ̃` equals the requested `δ`, with
//! `c_ε = (2+ε)/ε · (1/ln(1+ε))^{1+ε}`.

use alloc::vec::Vec;

use super::{check_delta, AlgoError, BaiResult, Halt};
use crate::sampling::{EmpiricalStats, SampleOracle};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LilUcbParams {
    pub epsilon: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl Default for LilUcbParams {
    fn default() -> Self {
        Self { epsilon: 0.01, beta: 1.0, lambda: 9.0 }
    }
}

impl LilUcbParams {
    /// `c_ε` of the LIL union bound.
    pub fn c_epsilon(&self) -> f64 {
        let e = self.epsilon;
        (2.0 + e) / e * libm::pow(1.0 / libm::log1p(e), 1.0 + e)
    }

    /// Inner confidence `δ̃` with `4√(c_ε δ̃) + 4 c_ε δ̃ ≤ δ`.
    pub fn inner_delta(&self, delta: f64) -> f64 {
        // Solve 4x + 4x² = δ for x = √(c_ε δ̃).
        let x = (libm::sqrt(1.0 + delta) - 1.0) / 2.0;
        x * x / self.c_epsilon() * (1.0 - 1e-12)
    }

    fn validate(&self) -> Result<(), AlgoError> {
        let checks = [
            ("epsilon", self.epsilon, self.epsilon > 0.0 && self.epsilon < 1.0),
            ("beta", self.beta, self.beta > 0.0 && self.beta.is_finite()),
            ("lambda", self.lambda, self.lambda > 0.0 && self.lambda.is_finite()),
        ];
        for (name, value, ok) in checks {
            if !ok {
                return Err(AlgoError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }
}

/// Confidence width of an arm pulled `t` times.
pub fn lil_confidence(t: u64, epsilon: f64, beta: f64, inner_delta: f64) -> f64 {
    let t = t as f64;
    let inner = libm::log(libm::log((1.0 + epsilon) * t) / inner_delta);
    (1.0 + beta)
        * (1.0 + libm::sqrt(epsilon))
        * libm::sqrt(2.0 * (1.0 + epsilon) * inner / t)
}

struct State {
    stats: EmpiricalStats,
    params: LilUcbParams,
    inner_delta: f64,
}

impl State {
    fn index(&self, arm: usize) -> f64 {
        let t = self.stats.count(arm);
        self.stats.mean(arm)
            + lil_confidence(t, self.params.epsilon, self.params.beta, self.inner_delta)
    }

    fn most_pulled(&self) -> usize {
        let counts = self.stats.counts();
        (0..counts.len()).fold(0, |best, a| if counts[a] > counts[best] { a } else { best })
    }
}

pub fn lil_ucb(
    oracle: &mut SampleOracle,
    delta: f64,
    params: &LilUcbParams,
) -> Result<BaiResult, AlgoError> {
    check_delta(delta)?;
    params.validate()?;
    let n = oracle.n_arms();
    let mut state = State {
        stats: EmpiricalStats::new(n),
        params: *params,
        inner_delta: params.inner_delta(delta),
    };
    let outcome = run(oracle, &mut state, n);
    let (selected, aborted) = match outcome {
        Ok(arm) => (arm, false),
        Err(Halt::Budget) => (state.most_pulled(), true),
        Err(Halt::Failed(e)) => return Err(e),
    };
    Ok(BaiResult {
        selected,
        total_samples: oracle.total_pulls(),
        rounds: Vec::new(),
        aborted,
        heuristic: false,
    })
}

fn run(oracle: &mut SampleOracle, state: &mut State, n: usize) -> Result<usize, Halt> {
    for arm in 0..n {
        let x = oracle.pull_one(arm)?;
        state.stats.record(arm, x);
    }
    let lambda = state.params.lambda;
    let mut indices: Vec<f64> = (0..n).map(|a| state.index(a)).collect();
    loop {
        let total: u64 = state.stats.counts().iter().sum();
        if let Some(winner) = (0..n).find(|&a| {
            let t = state.stats.count(a) as f64;
            t >= 1.0 + lambda * (total as f64 - t)
        }) {
            return Ok(winner);
        }

        let leader = argmax(&indices);
        let (runner, runner_value) = (0..n)
            .filter(|&a| a != leader)
            .map(|a| (a, indices[a]))
            .fold((usize::MAX, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        let others = total - state.stats.count(leader);
        let stop_at = libm::ceil(1.0 + lambda * others as f64) as u64;
        let width_floor = lil_confidence(stop_at, state.params.epsilon, state.params.beta, state.inner_delta);

        // Other indices stay fixed while the leader is pulled, so keep pulling
        // it until it either stops or loses the argmax.
        loop {
            let x = oracle.pull_one(leader)?;
            state.stats.record(leader, x);
            let t = state.stats.count(leader);
            if t >= stop_at {
                return Ok(leader);
            }
            let mean = state.stats.mean(leader);
            // The width decreases in t for t ≥ 2, so mean + width(stop_at) is a lower bound.
            if t >= 2 && keeps_lead(mean + width_floor, leader, runner_value, runner) {
                continue;
            }
            let value = state.index(leader);
            indices[leader] = value;
            if !keeps_lead(value, leader, runner_value, runner) {
                break;
            }
        }
        indices[leader] = state.index(leader);
    }
}

fn keeps_lead(value: f64, leader: usize, runner_value: f64, runner: usize) -> bool {
    value > runner_value || (value == runner_value && leader < runner)
}

fn argmax(values: &[f64]) -> usize {
    (1..values.len()).fold(0, |best, a| if values[a] > values[best] { a } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_clustered, gen_two_arm};
    use crate::instance::BanditInstance;

    /// Textbook loop: recompute every index after every pull.
    fn naive(oracle: &mut SampleOracle, delta: f64, params: &LilUcbParams) -> (usize, u64) {
        let n = oracle.n_arms();
        let mut s = State {
            stats: EmpiricalStats::new(n),
            params: *params,
            inner_delta: params.inner_delta(delta),
        };
        for a in 0..n {
            let x = oracle.pull_one(a).unwrap();
            s.stats.record(a, x);
        }
        loop {
            let total: u64 = s.stats.counts().iter().sum();
            for a in 0..n {
                let t = s.stats.count(a) as f64;
                if t >= 1.0 + params.lambda * (total as f64 - t) {
                    return (a, oracle.total_pulls());
                }
            }
            let idx: Vec<f64> = (0..n).map(|a| s.index(a)).collect();
            let a = argmax(&idx);
            let x = oracle.pull_one(a).unwrap();
            s.stats.record(a, x);
        }
    }

    #[test]
    fn golden_confidence_width() {
        // (1+1)(1+0.1) sqrt(2.02 ln(ln(3.03)/0.005) / 3)
        let w = lil_confidence(3, 0.01, 1.0, 0.005);
        assert!((w - 4.195_562_245_959_725).abs() < 1e-12, "{w}");
    }

    #[test]
    fn inner_delta_meets_union_bound() {
        let p = LilUcbParams::default();
        assert!((p.c_epsilon() - 21_153.398_975_352_25).abs() < 1e-6);
        for &d in &[0.1, 0.05, 0.01] {
            let dt = p.inner_delta(d);
            let c = p.c_epsilon();
            let total = 4.0 * libm::sqrt(c * dt) + 4.0 * c * dt;
            assert!(total <= d && total > d * (1.0 - 1e-9));
            // Keeps every log term at least 1.
            assert!(dt < libm::log1p(p.epsilon) / core::f64::consts::E);
        }
        assert!((p.inner_delta(0.1) - 2.815_509_297_669_789_5e-8).abs() < 1e-18);
    }

    #[test]
    fn streak_shortcut_matches_naive_loop() {
        let p = LilUcbParams::default();
        let instances = [
            gen_two_arm(0.5).unwrap(),
            gen_clustered(&[3, 2], &[0.5, 0.25], 0.0).unwrap(),
            BanditInstance::new(alloc::vec![0.1, 0.3, 0.2, 0.0]).unwrap(),
        ];
        for inst in &instances {
            for seed in 0..20 {
                let fast = lil_ucb(&mut SampleOracle::new(inst, seed), 0.1, &p).unwrap();
                let slow = naive(&mut SampleOracle::new(inst, seed), 0.1, &p);
                assert_eq!((fast.selected, fast.total_samples), slow);
            }
        }
    }

    #[test]
    fn two_arm_error_rate() {
        let inst = gen_two_arm(0.5).unwrap();
        let p = LilUcbParams::default();
        let errors = (0..1000)
            .filter(|&s| lil_ucb(&mut SampleOracle::new(&inst, s), 0.1, &p).unwrap().selected != 0)
            .count();
        assert!(errors <= 100, "{errors}");
    }

    #[test]
    fn dominant_arm() {
        let inst = gen_clustered(&[7], &[1.0], 1.0).unwrap();
        let p = LilUcbParams::default();
        let hits = (0..1000)
            .filter(|&s| lil_ucb(&mut SampleOracle::new(&inst, s), 0.05, &p).unwrap().selected == 0)
            .count();
        assert!(hits >= 950, "{hits}");
    }

    #[test]
    fn budget_abort_returns_most_pulled() {
        let inst = gen_two_arm(0.01).unwrap();
        let mut o = SampleOracle::new(&inst, 0).with_budget_cap(Some(500));
        let r = lil_ucb(&mut o, 0.1, &LilUcbParams::default()).unwrap();
        assert!(r.aborted);
        assert_eq!(r.total_samples, 500);
        let pulls = o.per_arm_pulls();
        assert!(pulls[r.selected] >= pulls[1 - r.selected]);
    }

    #[test]
    fn rejects_bad_params() {
        let inst = gen_two_arm(0.5).unwrap();
        let p = LilUcbParams { epsilon: 0.0, ..Default::default() };
        assert!(matches!(
            lil_ucb(&mut SampleOracle::new(&inst, 0), 0.1, &p),
            Err(AlgoError::InvalidParameter { name: "epsilon", .. })
        ));
    }
}
