//! Closed-form sample-complexity expressions.
//!
//! All expressions use natural logarithms and unit constant factors, so they
//! describe the shape of each bound rather than its value. Double logarithms
//! use the clamped form `lnln(x) = ln(max(ln(max(x, e)), 1))`, which is zero
//! for `x ≤ e`.

use crate::entropy::decompose;
use crate::instance::{BanditInstance, ModelError};

/// Clamped iterated logarithm; non-negative and finite for every `x`.
pub fn lnln(x: f64) -> f64 {
    let inner = libm::log(x.max(core::f64::consts::E));
    libm::log(inner.max(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityBounds {
    /// `Σ Δ_i^{-2} ln δ^{-1}`.
    pub mt: f64,
    /// `Σ Δ_i^{-2} (lnln Δ_i^{-1} + ln δ^{-1})`.
    pub kks_jmns: f64,
    /// `Δ_2^{-2} lnln Δ_2^{-1} + Σ Δ_i^{-2} ln δ^{-1} + Σ Δ_i^{-2} lnln min(n, Δ_i^{-1})`.
    pub eq1: f64,
    /// `Δ_2^{-2} lnln Δ_2^{-1} + Σ Δ_i^{-2} ln δ^{-1}`, the clustered-instance bound.
    pub eq2_clustered: f64,
    /// `H (ln δ^{-1} + Ent)`.
    pub conjectured: f64,
    pub delta: f64,
}

pub fn complexity_bounds(
    instance: &BanditInstance,
    delta: f64,
) -> Result<ComplexityBounds, ModelError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(ModelError::InvalidDelta(delta));
    }
    let profile = instance.gap_profile();
    let decomposition = decompose(&profile);
    let log_inv_delta = -libm::log(delta);
    let n = profile.n_arms() as f64;

    let mut hardness = 0.0;
    let mut kks_extra = 0.0;
    let mut eq1_extra = 0.0;
    for &gap in profile.gaps() {
        let w = 1.0 / (gap * gap);
        hardness += w;
        kks_extra += w * lnln(1.0 / gap);
        eq1_extra += w * lnln(n.min(1.0 / gap));
    }
    let d2 = profile.min_gap();
    let duel = lnln(1.0 / d2) / (d2 * d2);
    let mt = hardness * log_inv_delta;

    Ok(ComplexityBounds {
        mt,
        kks_jmns: mt + kks_extra,
        eq1: duel + mt + eq1_extra,
        eq2_clustered: duel + mt,
        conjectured: decomposition.total_weight() * (log_inv_delta + decomposition.entropy_nat()),
        delta,
    })
}
