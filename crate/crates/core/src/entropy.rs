//! Dyadic group decomposition and gap entropy.
//!
//! Non-best arms are grouped by the band their gap falls in: group `k`
//! holds ranks with `2^{-k} ≤ Δ_i < 2^{-k+1}`. Each group carries weight
//! `H_k = Σ Δ_i^{-2}`; normalising the weights gives a distribution `p_k`
//! whose Shannon entropy (natural log) is the gap entropy of the instance.

use alloc::vec::Vec;

use crate::gaps::GapProfile;
use crate::instance::BanditInstance;

/// Band index `k` with `2^{-k} ≤ gap < 2^{-k+1}`.
///
/// Exact for every positive finite `gap`, including band boundaries.
pub fn band_index(gap: f64) -> i32 {
    debug_assert!(gap > 0.0 && gap.is_finite());
    // gap = mantissa * 2^exp with mantissa in [0.5, 1).
    let (_, exp) = libm::frexp(gap);
    1 - exp
}

/// One nonempty group of the decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    /// Band index.
    pub k: i32,
    /// Ranks (2-based, by descending mean) of the arms in the band.
    pub ranks: Vec<usize>,
    /// `H_k`.
    pub weight: f64,
    /// `p_k = H_k / H`.
    pub prob: f64,
}

/// Nonempty groups sorted by ascending `k` (i.e. descending gap).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDecomposition {
    groups: Vec<Group>,
    total_weight: f64,
    entropy_nat: f64,
}

impl GroupDecomposition {
    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn group(&self, k: i32) -> Option<&Group> {
        self.groups.iter().find(|g| g.k == k)
    }

    /// Number of nonempty groups.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// `H = Σ_k H_k`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn entropy_nat(&self) -> f64 {
        self.entropy_nat
    }

    pub fn entropy_bits(&self) -> f64 {
        self.entropy_nat / core::f64::consts::LN_2
    }
}

/// Shannon entropy in nats of a probability vector. Zero entries contribute nothing.
pub fn shannon_entropy_nats(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .fold(0.0, |acc, &p| acc - p * libm::log(p))
}

pub fn decompose(profile: &GapProfile) -> GroupDecomposition {
    // Gaps are non-decreasing, so band indices come out non-increasing.
    let mut groups: Vec<Group> = Vec::new();
    for (offset, &gap) in profile.gaps().iter().enumerate() {
        let k = band_index(gap);
        let rank = offset + 2;
        let w = 1.0 / (gap * gap);
        match groups.last_mut() {
            Some(g) if g.k == k => {
                g.ranks.push(rank);
                g.weight += w;
            }
            _ => groups.push(Group { k, ranks: alloc::vec![rank], weight: w, prob: 0.0 }),
        }
    }
    groups.reverse();
    let total_weight: f64 = groups.iter().map(|g| g.weight).sum();
    for g in &mut groups {
        g.prob = g.weight / total_weight;
    }
    let probs: Vec<f64> = groups.iter().map(|g| g.prob).collect();
    GroupDecomposition { groups, total_weight, entropy_nat: shannon_entropy_nats(&probs) }
}

pub fn gap_entropy(instance: &BanditInstance) -> f64 {
    decompose(&instance.gap_profile()).entropy_nat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::LN_2;
    use proptest::prelude::*;

    fn profile(gaps: &[f64]) -> GapProfile {
        GapProfile::from_gaps(gaps.to_vec()).unwrap()
    }

    #[test]
    fn band_boundaries() {
        assert_eq!(band_index(0.5), 1);
        assert_eq!(band_index(0.75), 1);
        assert_eq!(band_index(0.499_999), 2);
        assert_eq!(band_index(1.0), 0);
        assert_eq!(band_index(1.5), 0);
        assert_eq!(band_index(2.0), -1);
        assert_eq!(band_index(0.125), 3);
    }

    #[test]
    fn single_gap_half() {
        let d = decompose(&profile(&[0.5]));
        assert_eq!(d.len(), 1);
        assert_eq!(d.groups()[0].k, 1);
        assert_eq!(d.groups()[0].ranks, vec![2]);
        assert_eq!(d.groups()[0].weight, 4.0);
        assert_eq!(d.groups()[0].prob, 1.0);
        assert_eq!(d.entropy_nat(), 0.0);
        assert!(d.entropy_nat().is_sign_positive());
    }

    #[test]
    fn unit_gap_lands_in_group_zero() {
        let d = decompose(&profile(&[1.0]));
        assert_eq!(d.groups()[0].k, 0);
        assert_eq!(d.groups()[0].weight, 1.0);
    }

    #[test]
    fn two_equal_weight_bands() {
        let d = decompose(&profile(&[0.5, 0.5, 0.5, 0.5, 0.25]));
        assert_eq!(d.group(1).unwrap().weight, 16.0);
        assert_eq!(d.group(2).unwrap().weight, 16.0);
        assert_eq!(d.group(2).unwrap().ranks, vec![2]);
        assert_eq!(d.group(1).unwrap().ranks, vec![3, 4, 5, 6]);
        assert_eq!(d.total_weight(), 32.0);
        assert!((d.entropy_nat() - LN_2).abs() < 1e-15);
        assert!((d.entropy_bits() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn six_arm_instance_entropy() {
        let inst = BanditInstance::new(vec![1.0, 0.5, 0.5, 0.5, 0.5, 0.75]).unwrap();
        assert!((gap_entropy(&inst) - core::f64::consts::LN_2).abs() < 1e-12);
    }

    fn gaps_strategy() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(1e-4f64..4.0, 1..60)
    }

    proptest! {
        #[test]
        fn partition_is_total(gaps in gaps_strategy()) {
            let p = profile(&gaps);
            let d = decompose(&p);
            let mut ranks: Vec<usize> = d.groups().iter().flat_map(|g| g.ranks.iter().copied()).collect();
            ranks.sort_unstable();
            prop_assert_eq!(ranks, (2..=gaps.len() + 1).collect::<Vec<_>>());
            let direct: f64 = gaps.iter().map(|g| 1.0 / (g * g)).sum();
            prop_assert!((d.total_weight() - direct).abs() <= 1e-9 * direct.max(1.0));
            let psum: f64 = d.groups().iter().map(|g| g.prob).sum();
            prop_assert!((psum - 1.0).abs() < 1e-12);
            for g in d.groups() {
                prop_assert!(g.weight > 0.0);
                for &r in &g.ranks {
                    let gap = p.gaps()[r - 2];
                    prop_assert!(libm::ldexp(1.0, -g.k) <= gap && gap < libm::ldexp(1.0, 1 - g.k));
                }
            }
        }

        #[test]
        fn entropy_between_zero_and_log_m(gaps in gaps_strategy()) {
            let d = decompose(&profile(&gaps));
            let m = d.len() as f64;
            prop_assert!(d.entropy_nat() >= 0.0);
            prop_assert!(d.entropy_nat() <= libm::log(m) + 1e-12);
            if d.len() == 1 {
                prop_assert_eq!(d.entropy_nat(), 0.0);
            }
        }
    }
}
