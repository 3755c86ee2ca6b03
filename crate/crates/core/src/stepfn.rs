//! Nonnegative step functions on `(0, 1]`.

use alloc::vec::Vec;

use crate::error::{domain, Error, Result};
use crate::fmath::{ln, powf};
use crate::profile::DecreasingProfile;
use crate::quadrature::{integrate, QuadratureConfig};

/// A step function with value `v_i` on `(t_{i-1}, t_i]`, where
/// `0 = t_0 < t_1 < … < t_n = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breaks: Vec<f64>,
    values: Vec<f64>,
    // prefix[i] = ∫_0^{t_i}
    prefix: Vec<f64>,
}

impl StepFunction {
    /// Validates the breakpoints and values.
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Malformed("step function needs at least one cell"));
        }
        if breaks.len() != values.len() + 1 {
            return Err(Error::Malformed("need exactly one more breakpoint than values"));
        }
        if breaks[0] != 0.0 || breaks[breaks.len() - 1] != 1.0 {
            return Err(Error::Malformed("breakpoints must run from 0 to 1"));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Malformed("breakpoints must be strictly increasing"));
        }
        if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::Malformed("values must be finite and nonnegative"));
        }
        let mut prefix = Vec::with_capacity(breaks.len());
        prefix.push(0.0);
        let mut acc = 0.0;
        for (i, v) in values.iter().enumerate() {
            acc += v * (breaks[i + 1] - breaks[i]);
            prefix.push(acc);
        }
        Ok(StepFunction {
            breaks,
            values,
            prefix,
        })
    }

    /// The constant function `c`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(alloc::vec![0.0, 1.0], alloc::vec![c])
    }

    /// `n` cells of width `1/n`.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        let mut breaks: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        if let Some(last) = breaks.last_mut() {
            *last = 1.0;
        }
        Self::new(breaks, values)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(t_start, t_end, value)` for each cell.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.breaks[i], self.breaks[i + 1], *v))
    }

    /// Index of the cell `(t_{i-1}, t_i]` containing `t ∈ (0, 1]`.
    fn cell_of(&self, t: f64) -> usize {
        let inner = &self.breaks[1..];
        inner.partition_point(|b| *b < t).min(self.values.len() - 1)
    }

    pub fn value_at(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(domain("step function", t, "0 < t <= 1"));
        }
        Ok(self.values[self.cell_of(t)])
    }

    /// `∫_0^t` for `t ∈ [0, 1]`.
    pub fn prefix_integral(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(domain("prefix integral", t, "0 <= t <= 1"));
        }
        Ok(self.prefix_unchecked(t))
    }

    fn prefix_unchecked(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let i = self.cell_of(t);
        self.prefix[i] + self.values[i] * (t - self.breaks[i])
    }

    /// `∫_0^1`.
    pub fn total(&self) -> f64 {
        self.prefix[self.values.len()]
    }

    /// `(1/t) ∫_0^t`.
    pub fn hardy_average(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(domain("Hardy average", t, "0 < t <= 1"));
        }
        Ok(self.prefix_unchecked(t) / t)
    }

    /// Measure of `{t : h(t) > λ}`.
    pub fn measure_above(&self, lambda: f64) -> f64 {
        self.cells()
            .filter(|(_, _, v)| *v > lambda)
            .map(|(a, b, _)| b - a)
            .sum()
    }

    /// `∫_a^b h^p`, exact.
    pub fn lp_integral(&self, p: f64, a: f64, b: f64) -> Result<f64> {
        check_range(a, b)?;
        if !(p >= 1.0) {
            return Err(domain("lp_integral exponent", p, "p >= 1"));
        }
        let mut total = 0.0;
        for (lo, hi, v) in self.cells() {
            let len = hi.min(b) - lo.max(a);
            if len > 0.0 {
                total += powf(v, p) * len;
            }
        }
        Ok(total)
    }

    /// The cell pieces of `(a, b]` with `(lo, hi, v, D)`, where the Hardy
    /// average on the piece is `v + D/t`.
    fn hardy_pieces(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.values.iter().enumerate().filter_map(move |(i, v)| {
            let lo = self.breaks[i].max(a);
            let hi = self.breaks[i + 1].min(b);
            if hi <= lo {
                return None;
            }
            let d = if i == 0 {
                0.0
            } else {
                self.prefix[i] - v * self.breaks[i]
            };
            Some((lo, hi, *v, d))
        })
    }

    /// `∫_a^b ((1/t)∫_0^t h)^p dt` by per-cell adaptive quadrature.
    ///
    /// On each cell the integrand is `(v + D/t)^p`; the first cell has
    /// `D = 0`, so there is no singularity at `t = 0`.
    pub fn hardy_lp_integral(&self, p: f64, a: f64, b: f64, q: &QuadratureConfig) -> Result<f64> {
        check_range(a, b)?;
        q.validate()?;
        if a == b {
            return Ok(0.0);
        }
        let width = b - a;
        let mut total = 0.0;
        for (lo, hi, v, d) in self.hardy_pieces(a, b) {
            if d == 0.0 {
                total += powf(v, p) * (hi - lo);
                continue;
            }
            let local = QuadratureConfig {
                abs_tol: q.abs_tol * (hi - lo) / width,
                max_subdivisions: q.max_subdivisions,
            };
            total += integrate(|t| powf(v + d / t, p), lo, hi, &local)?;
        }
        Ok(total)
    }

    /// `∫_a^b ((1/t)∫_0^t h)^2 dt` from the antiderivative of
    /// `v² + 2vD/t + D²/t²` on each cell.
    pub fn hardy_l2_closed_form(&self, a: f64, b: f64) -> Result<f64> {
        check_range(a, b)?;
        let mut total = 0.0;
        for (lo, hi, v, d) in self.hardy_pieces(a, b) {
            total += v * v * (hi - lo);
            if d != 0.0 {
                total += 2.0 * v * d * ln(hi / lo) + d * d * (1.0 / lo - 1.0 / hi);
            }
        }
        Ok(total)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }
}

fn check_range(a: f64, b: f64) -> Result<()> {
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(domain("integration range", a, "0 <= a <= b <= 1"));
    }
    Ok(())
}

/// The non-increasing rearrangement.
///
/// Cells are sorted by value (descending, stable in the original index) and
/// laid out from `0`; equal values are not merged.
pub fn rearrange_decreasing(sf: &StepFunction) -> StepFunction {
    let mut order: Vec<usize> = (0..sf.len()).collect();
    order.sort_by(|&i, &j| sf.values[j].total_cmp(&sf.values[i]));
    let mut breaks = Vec::with_capacity(sf.len() + 1);
    let mut values = Vec::with_capacity(sf.len());
    breaks.push(0.0);
    let mut acc = 0.0;
    for i in order {
        acc += sf.breaks[i + 1] - sf.breaks[i];
        breaks.push(acc);
        values.push(sf.values[i]);
    }
    let n = breaks.len();
    breaks[n - 1] = 1.0;
    // rounding in the running sum can only produce a non-increasing break at
    // the very end; collapse such cells into their predecessor
    if breaks.windows(2).all(|w| w[0] < w[1]) {
        return StepFunction::new(breaks, values).expect("rearrangement of a valid step function");
    }
    let mut b2 = alloc::vec![0.0];
    let mut v2 = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if breaks[i + 1] > *b2.last().unwrap() {
            b2.push(breaks[i + 1]);
            v2.push(*v);
        }
    }
    *b2.last_mut().unwrap() = 1.0;
    StepFunction::new(b2, v2).expect("rearrangement of a valid step function")
}

impl DecreasingProfile for StepFunction {
    fn value_at(&self, t: f64) -> Result<f64> {
        StepFunction::value_at(self, t)
    }

    fn integral(&self, a: f64, b: f64) -> Result<f64> {
        check_range(a, b)?;
        Ok(self.prefix_unchecked(b) - self.prefix_unchecked(a))
    }

    fn lp_integral(&self, p: f64, a: f64, b: f64) -> Result<f64> {
        StepFunction::lp_integral(self, p, a, b)
    }

    fn hardy_lp_integral(&self, p: f64, a: f64, b: f64, q: &QuadratureConfig) -> Result<f64> {
        StepFunction::hardy_lp_integral(self, p, a, b, q)
    }

    fn is_non_increasing(&self) -> bool {
        StepFunction::is_non_increasing(self)
    }
}

/// `(δ_k, δ'_k)`: the `p`-th roots of the ratios of the Hardy `L^p` integral
/// to the `L^p` integral of `h`, on `(0, k]` and on `(k, 1]`.
///
/// Both are at least `1` for non-increasing `h`; the values are clamped there
/// to absorb quadrature rounding.
pub fn delta_stat<P: DecreasingProfile + ?Sized>(
    h: &P,
    p: f64,
    k: f64,
    q: &QuadratureConfig,
) -> Result<(f64, f64)> {
    if !(k > 0.0 && k < 1.0) {
        return Err(domain("delta_stat", k, "0 < k < 1"));
    }
    if !h.is_non_increasing() {
        return Err(Error::NotMonotone);
    }
    let a0k = h.lp_integral(p, 0.0, k)?;
    let ak1 = h.lp_integral(p, k, 1.0)?;
    if !(a0k > 0.0) {
        return Err(Error::ZeroIntegral("∫_0^k h^p"));
    }
    if !(ak1 > 0.0) {
        return Err(Error::ZeroIntegral("∫_k^1 h^p"));
    }
    let j0k = h.hardy_lp_integral(p, 0.0, k, q)?;
    let jk1 = h.hardy_lp_integral(p, k, 1.0, q)?;
    let delta = powf(j0k / a0k, 1.0 / p).max(1.0);
    let delta_prime = powf(jk1 / ak1, 1.0 / p).max(1.0);
    Ok((delta, delta_prime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn two_cell() -> StepFunction {
        StepFunction::new(vec![0.0, 0.5, 1.0], vec![2.0, 0.0]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(StepFunction::new(vec![0.0, 1.0], vec![]).is_err());
        assert!(StepFunction::new(vec![0.0, 0.5], vec![1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 0.5, 0.5, 1.0], vec![1.0, 1.0, 1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![-1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![f64::NAN]).is_err());
    }

    #[test]
    fn rearrangement_examples() {
        let r = rearrange_decreasing(&two_cell());
        assert_eq!(r.breaks(), &[0.0, 0.5, 1.0]);
        assert_eq!(r.values(), &[2.0, 0.0]);
        let c = StepFunction::constant(3.0).unwrap();
        assert_eq!(rearrange_decreasing(&c), c);
        let s = StepFunction::new(vec![0.0, 0.25, 0.5, 1.0], vec![1.0, 3.0, 2.0]).unwrap();
        let r = rearrange_decreasing(&s);
        assert_eq!(r.breaks(), &[0.0, 0.25, 0.75, 1.0]);
        assert_eq!(r.values(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn lp_examples() {
        assert_eq!(StepFunction::constant(1.0).unwrap().lp_integral(2.0, 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(two_cell().lp_integral(2.0, 0.0, 1.0).unwrap(), 2.0);
        assert_eq!(two_cell().lp_integral(2.0, 0.25, 0.75).unwrap(), 1.0);
        assert!(two_cell().lp_integral(2.0, 0.75, 0.25).is_err());
    }

    #[test]
    fn hardy_average_examples() {
        let c = StepFunction::constant(1.7).unwrap();
        assert!((c.hardy_average(0.3).unwrap() - 1.7).abs() < 1e-15);
        assert!((two_cell().hardy_average(0.75).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(two_cell().hardy_average(0.5).unwrap(), 2.0);
        assert!(two_cell().hardy_average(0.0).is_err());
    }

    #[test]
    fn hardy_lp_examples() {
        let q = QuadratureConfig::default();
        let c = StepFunction::constant(1.5).unwrap();
        assert!((c.hardy_lp_integral(3.0, 0.0, 1.0, &q).unwrap() - 1.5f64.powi(3)).abs() < 1e-14);
        let v = two_cell().hardy_lp_integral(2.0, 0.5, 1.0, &q).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        assert!((two_cell().hardy_l2_closed_form(0.5, 1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn delta_examples() {
        let q = QuadratureConfig::default();
        let (d, dp) = delta_stat(&StepFunction::constant(1.0).unwrap(), 2.0, 0.5, &q).unwrap();
        assert_eq!((d, dp), (1.0, 1.0));
        let reg = StepFunction::new(vec![0.0, 0.5, 1.0], vec![2.0, 1e-3]).unwrap();
        let (d, _) = delta_stat(&reg, 2.0, 0.5, &q).unwrap();
        assert_eq!(d, 1.0);
        assert!(matches!(delta_stat(&two_cell(), 2.0, 0.5, &q), Err(Error::ZeroIntegral(_))));
        let inc = StepFunction::new(vec![0.0, 0.5, 1.0], vec![1.0, 2.0]).unwrap();
        assert!(matches!(delta_stat(&inc, 2.0, 0.5, &q), Err(Error::NotMonotone)));
    }

    fn arb_step() -> impl Strategy<Value = StepFunction> {
        prop::collection::vec((0.01f64..1.0, 0.0f64..5.0), 1..40).prop_map(|cells| {
            let total: f64 = cells.iter().map(|c| c.0).sum();
            let mut breaks = vec![0.0];
            let mut acc = 0.0;
            for c in &cells {
                acc += c.0 / total;
                breaks.push(acc);
            }
            *breaks.last_mut().unwrap() = 1.0;
            StepFunction::new(breaks, cells.iter().map(|c| c.1).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn rearrangement_properties(sf in arb_step()) {
            let r = rearrange_decreasing(&sf);
            prop_assert!(r.is_non_increasing());
            prop_assert_eq!(rearrange_decreasing(&r).clone(), r.clone());
            for v in sf.values() {
                for lambda in [*v, v * 0.5, v + 1e-9] {
                    prop_assert!((sf.measure_above(lambda) - r.measure_above(lambda)).abs() < 1e-12);
                }
            }
            prop_assert!((sf.total() - r.total()).abs() < 1e-12);
            for i in 1..=100 {
                let t = i as f64 / 100.0;
                prop_assert!(r.hardy_average(t).unwrap() >= r.value_at(t).unwrap() * (1.0 - 1e-12));
            }
        }

        #[test]
        fn quadrature_matches_closed_form(sf in arb_step(), a in 0.0f64..0.5, w in 0.0f64..0.5) {
            let q = QuadratureConfig::default();
            let num = sf.hardy_lp_integral(2.0, a, a + w, &q).unwrap();
            let exact = sf.hardy_l2_closed_form(a, a + w).unwrap();
            prop_assert!((num - exact).abs() <= 1e-9 * exact.max(1.0));
        }
    }
}
