//! Gap-entropy calculus and fixed-confidence best-arm identification.
//!
//! The crate is `no_std` and only needs `alloc`. It contains the pure
//! pieces of the best-arm laboratory:
//!
//! * [`instance`], [`gaps`], [`entropy`] and [`bounds`]: the instance model,
//!   the dyadic group decomposition with its gap entropy, and the closed-form
//!   sample-complexity expressions evaluated with unit constants.
//! * [`sampling`]: a seeded unit-variance Gaussian reward oracle with pull
//!   accounting and a hard budget cap.
//! * [`algorithms`]: successive elimination, median elimination, exponential
//!   gap elimination with three failure-budget schedules, and lil'UCB.
//! * [`generators`]: two-arm, clustered, max-entropy and random instance
//!   families plus seeded permutations.
//!
//! Everything that touches files, threads or the command line lives in the
//! `bestarm` companion crate.

#![no_std]
#![deny(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algorithms;
pub mod bounds;
pub mod entropy;
pub mod gaps;
pub mod generators;
pub mod instance;
pub mod sampling;
pub mod seed;

pub use algorithms::{
    AlgoError, Algorithm, AlgorithmParams, AllocationPlan, AllocationScheme, BaiResult,
    RoundTrace,
};
pub use bounds::{complexity_bounds, ComplexityBounds};
pub use entropy::{decompose, gap_entropy, Group, GroupDecomposition};
pub use gaps::{gap_profile, GapProfile};
pub use generators::InstanceSpec;
pub use instance::{BanditInstance, ModelError, UNIT_VARIANCE};
pub use sampling::{confidence_radius, EmpiricalStats, SampleError, SampleOracle};
