//! Splitting the failure probability `δ` across elimination rounds.
//!
//! Round `r` costs about `H_r ln(1/δ_r)` samples, so the best split under
//! `Σ δ_r ≤ δ` minimises `Σ H_r ln(1/δ_r)`. The Lagrangian gives
//! `δ_r = δ H_r / H`, and the minimum equals `H (ln(1/δ) + Ent)` where `Ent`
//! is the natural-log entropy of `H_r / H`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{check_delta, AlgoError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllocationScheme {
    /// `δ_r = 6δ / (π² r²)`.
    FixedQuadratic,
    /// Proportional to the true group weights.
    OracleEntropy,
    /// Proportional to weights estimated during the run.
    AdaptiveEntropy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationPlan {
    pub deltas: Vec<f64>,
    pub weights: Vec<f64>,
    pub scheme: AllocationScheme,
}

impl AllocationPlan {
    /// `Σ_r H_r ln(1/δ_r)`.
    pub fn objective(&self) -> f64 {
        allocation_objective(&self.weights, &self.deltas)
    }

    pub fn total(&self) -> f64 {
        self.deltas.iter().sum()
    }
}

pub fn allocation_objective(weights: &[f64], deltas: &[f64]) -> f64 {
    weights.iter().zip(deltas).map(|(h, d)| -h * libm::log(*d)).sum()
}

/// `δ_r = δ H_r / Σ H_j`.
pub fn optimal_allocation(weights: &[f64], delta: f64) -> Result<AllocationPlan, AlgoError> {
    check_delta(delta)?;
    if weights.is_empty() {
        return Err(AlgoError::EmptyWeights);
    }
    if let Some((index, &weight)) =
        weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w > 0.0))
    {
        return Err(AlgoError::NonPositiveWeight { index, weight });
    }
    let total: f64 = weights.iter().sum();
    let mut deltas: Vec<f64> = weights.iter().map(|h| delta * (h / total)).collect();
    // Rounding can push the sum a few ulps past δ.
    while deltas.iter().sum::<f64>() > delta {
        for d in &mut deltas {
            *d *= 1.0 - f64::EPSILON;
        }
    }
    Ok(AllocationPlan {
        deltas,
        weights: weights.to_vec(),
        scheme: AllocationScheme::OracleEntropy,
    })
}

/// `6δ / (π² r²)` for `r ≥ 1`; sums to `δ` over all rounds.
pub fn fixed_quadratic_delta(delta: f64, round: u32) -> f64 {
    let r = round as f64;
    6.0 * delta / (PI * PI * r * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::shannon_entropy_nats;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symmetric_split() {
        let p = optimal_allocation(&[1.0, 1.0], 0.1).unwrap();
        assert_eq!(p.deltas, vec![0.05, 0.05]);
    }

    #[test]
    fn proportional_split() {
        let p = optimal_allocation(&[1.0, 3.0], 0.04).unwrap();
        assert!((p.deltas[0] - 0.01).abs() < 1e-17);
        assert!((p.deltas[1] - 0.03).abs() < 1e-17);
        assert!(p.total() <= 0.04);
    }

    #[test]
    fn equal_bands_objective() {
        // 32 (ln 10 + ln 2), the conjectured bound of the six-arm ln 2 instance.
        let p = optimal_allocation(&[16.0, 16.0], 0.1).unwrap();
        assert!((p.objective() - 95.863_432_753_727_72).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(optimal_allocation(&[1.0], 1.0), Err(AlgoError::InvalidDelta(1.0)));
        assert_eq!(optimal_allocation(&[], 0.1), Err(AlgoError::EmptyWeights));
        assert_eq!(
            optimal_allocation(&[1.0, 0.0], 0.1),
            Err(AlgoError::NonPositiveWeight { index: 1, weight: 0.0 })
        );
    }

    #[test]
    fn quadratic_schedule_sums_to_delta() {
        let s: f64 = (1..=1_000_000).map(|r| fixed_quadratic_delta(0.1, r)).sum();
        assert!(s < 0.1 && s > 0.1 - 1e-6);
    }

    #[test]
    fn identity_and_kkt_on_random_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let len = rng.random_range(1..=20);
            let w: Vec<f64> = (0..len).map(|_| rng.random_range(0.01..10.0)).collect();
            for &delta in &[0.1, 0.01] {
                let plan = optimal_allocation(&w, delta).unwrap();
                assert!(plan.total() <= delta);
                let h: f64 = w.iter().sum();
                let probs: Vec<f64> = w.iter().map(|x| x / h).collect();
                let closed = h * (-libm::log(delta) + shannon_entropy_nats(&probs));
                assert!((plan.objective() - closed).abs() < 1e-9);
                for _ in 0..1000 {
                    let raw: Vec<f64> = (0..len).map(|_| rng.random_range(1e-3..1.0)).collect();
                    let s: f64 = raw.iter().sum();
                    let alt: Vec<f64> = raw.iter().map(|x| delta * x / s).collect();
                    assert!(allocation_objective(&w, &alt) >= plan.objective() - 1e-9);
                }
            }
        }
    }
}
