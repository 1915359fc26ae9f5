//! Instance families used to probe the entropy calculus and the algorithms.

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{BanditInstance, ModelError};

/// Largest supported group count for [`gen_max_entropy`] (349 526 arms).
pub const MAX_ENTROPY_GROUPS: u32 = 10;

fn check_gap(gap: f64) -> Result<(), ModelError> {
    if gap.is_finite() && gap > 0.0 {
        Ok(())
    } else {
        Err(ModelError::NonPositiveGap(gap))
    }
}

/// Means `[1, 1 - gap]`.
pub fn gen_two_arm(gap: f64) -> Result<BanditInstance, ModelError> {
    check_gap(gap)?;
    BanditInstance::new(alloc::vec![1.0, 1.0 - gap])
}

/// One best arm at `base_mean` followed by `sizes[j]` arms at `base_mean - gaps[j]`.
pub fn gen_clustered(
    sizes: &[usize],
    gaps: &[f64],
    base_mean: f64,
) -> Result<BanditInstance, ModelError> {
    if sizes.len() != gaps.len() {
        return Err(ModelError::LengthMismatch {
            what: "cluster gaps",
            expected: sizes.len(),
            got: gaps.len(),
        });
    }
    let mut means = alloc::vec![base_mean];
    for (&size, &gap) in sizes.iter().zip(gaps) {
        check_gap(gap)?;
        means.extend(core::iter::repeat_n(base_mean - gap, size));
    }
    BanditInstance::new(means)
}

/// `4^{m-k}` arms at gap `2^{-k}` for `k = 1..=m`, below a best arm at 1.
///
/// Every band then has weight exactly `4^m`, so the gap entropy is `ln m`.
pub fn gen_max_entropy(m: u32) -> Result<BanditInstance, ModelError> {
    if m == 0 || m > MAX_ENTROPY_GROUPS {
        return Err(ModelError::GroupCountOutOfRange(m));
    }
    let mut means = alloc::vec![1.0];
    for k in 1..=m {
        let count = 1usize << (2 * (m - k));
        means.extend(core::iter::repeat_n(1.0 - libm::ldexp(1.0, -(k as i32)), count));
    }
    BanditInstance::new(means)
}

/// Best arm at 1 and `n - 1` gaps drawn log-uniformly from `[lo, hi]`.
pub fn gen_random(n: usize, lo: f64, hi: f64, seed: u64) -> Result<BanditInstance, ModelError> {
    if n < 2 {
        return Err(ModelError::TooFewArms(n));
    }
    if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
        return Err(ModelError::InvalidRange { lo, hi });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ln_lo, ln_hi) = (libm::log(lo), libm::log(hi));
    let mut means = alloc::vec![1.0];
    for _ in 1..n {
        let u: f64 = rng.random();
        let gap = libm::exp(ln_lo + u * (ln_hi - ln_lo)).clamp(lo, hi);
        means.push(1.0 - gap);
    }
    BanditInstance::new(means)
}

/// Uniformly random permutation of `0..n` drawn from `seed`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

/// Reorder the arms of `instance` by a uniformly random permutation.
pub fn apply_permutation(instance: &BanditInstance, seed: u64) -> BanditInstance {
    instance.reordered(&random_permutation(instance.n_arms(), seed))
}

/// Declarative description of an instance, as found in experiment configs.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    TwoArm { gap: f64 },
    Clustered { sizes: Vec<usize>, gaps: Vec<f64>, base_mean: f64 },
    MaxEntropy { m: u32 },
    Random { n: usize, gap_min: f64, gap_max: f64, seed: u64 },
    Explicit { means: Vec<f64>, name: Option<String> },
}

impl InstanceSpec {
    pub fn build(&self) -> Result<BanditInstance, ModelError> {
        Ok(match self {
            Self::TwoArm { gap } => gen_two_arm(*gap)?.with_name(alloc::format!("two-arm-{gap}")),
            Self::Clustered { sizes, gaps, base_mean } => {
                let total: usize = sizes.iter().sum();
                gen_clustered(sizes, gaps, *base_mean)?
                    .with_name(alloc::format!("clustered-{}", total + 1))
            }
            Self::MaxEntropy { m } => gen_max_entropy(*m)?.with_name(alloc::format!("max-entropy-{m}")),
            Self::Random { n, gap_min, gap_max, seed } => {
                gen_random(*n, *gap_min, *gap_max, *seed)?.with_name(alloc::format!("random-{n}-{seed}"))
            }
            Self::Explicit { means, name } => {
                let inst = BanditInstance::new(means.clone())?;
                match name {
                    Some(n) => inst.with_name(n.clone()),
                    None => inst,
                }
            }
        })
    }
}
