//! Constructive near-extremal pairs `(φ, K)`.
//!
//! At level `m`, `K` is the union of the first `round(k 2^m)` cells and `φ`
//! carries the cell averages of `g_k`: the power profile on `K` and the
//! constant `(f-B₀)/(1-k)` on the complement. The ratio
//! `∫_K (M_𝒯φ)^p / B_p(f, F, k)` tends to `1` as the level grows.

use alloc::vec::Vec;

use crate::bellman::{bellman_value, ProblemParams};
use crate::dyadic::{discretize_extremizer, DyadicSet};
use crate::error::Result;
use crate::extremizer::build_extremizer;
use crate::roots::RootFindConfig;

/// One point of the sharpness sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SharpnessPoint {
    pub level: u32,
    /// `∫_K (M_𝒯φ)^p / B_p(f, F, k)`.
    pub ratio: f64,
    /// `|K|`, the dyadic rational nearest to `k`.
    pub measure: f64,
    /// `∫ φ^p`, at most `F`.
    pub moment: f64,
}

/// The ratio `∫_K (M_𝒯φ)^p / B_p(f, F, k)` at one level.
pub fn sharpness_experiment(params: &ProblemParams, level: u32, cfg: &RootFindConfig) -> Result<f64> {
    Ok(sharpness_point(params, level, cfg)?.ratio)
}

/// [`sharpness_experiment`] with diagnostics.
pub fn sharpness_point(params: &ProblemParams, level: u32, cfg: &RootFindConfig) -> Result<SharpnessPoint> {
    let profile = build_extremizer(params, cfg)?;
    let phi = discretize_extremizer(&profile, level)?;
    let (set, measure) = DyadicSet::prefix_with_measure(level, params.k())?;
    let p = params.p().get();
    let achieved = phi.maximal_operator().integral_over(&set, p)?;
    Ok(SharpnessPoint {
        level,
        ratio: achieved / bellman_value(params, cfg)?,
        measure,
        moment: phi.lp_moment(p),
    })
}

/// [`sharpness_point`] for each level.
pub fn sharpness_sequence(params: &ProblemParams, levels: &[u32], cfg: &RootFindConfig) -> Result<Vec<SharpnessPoint>> {
    levels.iter().map(|l| sharpness_point(params, *l, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_ratio_is_one() {
        let cfg = RootFindConfig::default();
        let pr = ProblemParams::from_raw(3.0, 1.0, 1.0, 0.25).unwrap();
        for level in [2, 5, 8] {
            assert_eq!(sharpness_experiment(&pr, level, &cfg).unwrap(), 1.0);
        }
    }

    #[test]
    fn ratios_increase_with_level() {
        let cfg = RootFindConfig::default();
        let pr = ProblemParams::from_raw(2.0, 1.0, 2.0, 0.5).unwrap();
        let seq = sharpness_sequence(&pr, &[4, 6, 8, 10], &cfg).unwrap();
        for w in seq.windows(2) {
            assert!(w[1].ratio >= w[0].ratio);
            assert!(w[1].moment >= w[0].moment);
        }
        assert!(seq.iter().all(|s| s.ratio > 0.0 && s.ratio <= 1.0 && s.measure == 0.5));
    }
}
