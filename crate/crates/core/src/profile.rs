//! Functions on `(0, 1]` that support the integrals needed by the `δ_k`
//! statistics and the rearranged inequalities.

use crate::error::Result;
use crate::quadrature::QuadratureConfig;

/// A nonnegative function `h` on `(0, 1]` with exact (or quadrature-backed)
/// integrals.
pub trait DecreasingProfile {
    /// `h(t)` for `t ∈ (0, 1]`.
    fn value_at(&self, t: f64) -> Result<f64>;

    /// `∫_a^b h`.
    fn integral(&self, a: f64, b: f64) -> Result<f64>;

    /// `∫_a^b h^p`.
    fn lp_integral(&self, p: f64, a: f64, b: f64) -> Result<f64>;

    /// `∫_a^b ((1/t) ∫_0^t h)^p dt`.
    fn hardy_lp_integral(&self, p: f64, a: f64, b: f64, q: &QuadratureConfig) -> Result<f64>;

    /// Whether `h` is non-increasing, which the `δ_k` machinery assumes.
    fn is_non_increasing(&self) -> bool;
}
