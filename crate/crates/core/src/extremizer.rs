//! The extremal function
//!
//! ```text
//! g_k(t) = A₁ t^{-1+1/a}   on (0, k]
//!        = c               on (k, 1]
//! ```
//!
//! with `a = ω_p(Z₀)`, `A₁ = B₀ k^{-1/a}/a` and `c = (f-B₀)/(1-k)`. Its Hardy
//! average on `(0, k]` is `a·g_k`, so `∫_0^k ((1/t)∫_0^t g_k)^p = a^p ∫_0^k g_k^p`
//! equals `B_p(f, F, k)`.

use crate::bellman::{solve_b0, ProblemParams};
use crate::error::{domain, Result};
use crate::fmath::powf;
use crate::profile::DecreasingProfile;
use crate::quadrature::{integrate, QuadratureConfig};
use crate::roots::RootFindConfig;
use crate::special::omega_p;

/// `|a - 1|` below which the power piece is treated as the constant `A₁`.
pub const UNIT_EXPONENT_TOL: f64 = 1e-12;

/// The constants `(B₀, Z₀, a, A₁, c)` of `g_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremizerProfile {
    params: ProblemParams,
    b0: f64,
    z0: f64,
    a: f64,
    a1: f64,
    c: f64,
}

/// `(∫_0^1 g_k, ∫_0^1 g_k^p, ∫_0^k Hardy(g_k)^p)` in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremizerMoments {
    pub mass: f64,
    pub p_moment: f64,
    pub hardy_lp_on_0k: f64,
}

/// Builds `g_k` for the given parameters.
///
/// For `k = 1` this is `g₁` with `B₀ = f`, `Z₀ = f^p/F`, `A₁ = f/a` and no
/// tail; in the degenerate case `F = f^p` it is the constant `f`.
pub fn build_extremizer(params: &ProblemParams, cfg: &RootFindConfig) -> Result<ExtremizerProfile> {
    let (f, k) = (params.mean(), params.k());
    if params.is_degenerate() {
        return Ok(ExtremizerProfile {
            params: *params,
            b0: k * f,
            z0: 1.0,
            a: 1.0,
            a1: f,
            c: f,
        });
    }
    if k == 1.0 {
        let z0 = params.theta();
        let a = omega_p(params.p(), z0, cfg)?;
        let a1 = f / a;
        return Ok(ExtremizerProfile {
            params: *params,
            b0: f,
            z0,
            a,
            a1,
            c: a1,
        });
    }
    let opt = solve_b0(params, cfg)?;
    let a = opt.a;
    Ok(ExtremizerProfile {
        params: *params,
        b0: opt.b0,
        z0: opt.z0,
        a,
        a1: opt.b0 * powf(k, -1.0 / a) / a,
        c: (f - opt.b0) / (1.0 - k),
    })
}

impl ExtremizerProfile {
    pub fn params(&self) -> &ProblemParams {
        &self.params
    }
    /// `∫_0^k g_k`.
    pub fn b0(&self) -> f64 {
        self.b0
    }
    pub fn z0(&self) -> f64 {
        self.z0
    }
    /// Power exponent `a = ω_p(Z₀)`.
    pub fn a(&self) -> f64 {
        self.a
    }
    /// Leading coefficient `A₁`.
    pub fn a1(&self) -> f64 {
        self.a1
    }
    /// Tail value `c`.
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn k(&self) -> f64 {
        self.params.k()
    }

    fn power_exponent(&self) -> f64 {
        if (self.a - 1.0).abs() <= UNIT_EXPONENT_TOL {
            0.0
        } else {
            -1.0 + 1.0 / self.a
        }
    }

    /// `g_k(t)` for `t ∈ (0, 1]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(domain("g_k", t, "0 < t <= 1"));
        }
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: f64) -> f64 {
        if t <= self.k() {
            let e = self.power_exponent();
            if e == 0.0 {
                self.a1
            } else {
                self.a1 * powf(t, e)
            }
        } else {
            self.c
        }
    }

    /// `∫_0^t g_k` for `t ∈ [0, 1]`.
    pub fn prefix_integral(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(domain("prefix integral", t, "0 <= t <= 1"));
        }
        Ok(self.prefix_unchecked(t))
    }

    fn prefix_unchecked(&self, t: f64) -> f64 {
        let k = self.k();
        if t <= k {
            self.power_prefix(t)
        } else {
            self.power_prefix(k) + self.c * (t - k)
        }
    }

    // A₁ a t^{1/a}
    fn power_prefix(&self, t: f64) -> f64 {
        if self.power_exponent() == 0.0 {
            self.a1 * t
        } else {
            self.a1 * self.a * powf(t, 1.0 / self.a)
        }
    }

    /// `(1/t) ∫_0^t g_k`.
    pub fn hardy_average(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(domain("Hardy average", t, "0 < t <= 1"));
        }
        Ok(self.prefix_unchecked(t) / t)
    }

    /// Average of `g_k` over `(lo, hi]`.
    pub fn cell_average(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(domain("cell average", lo, "0 <= lo < hi <= 1"));
        }
        if lo >= self.k() || (self.power_exponent() == 0.0 && self.a1 == self.c) {
            return Ok(self.c);
        }
        Ok((self.prefix_unchecked(hi) - self.prefix_unchecked(lo)) / (hi - lo))
    }

    // ∫_lo^hi (A₁ t^e)^q over a subinterval of (0, k]
    fn power_lp(&self, q: f64, lo: f64, hi: f64) -> f64 {
        let e = self.power_exponent();
        let s = q * e + 1.0;
        if s <= 0.0 {
            return f64::INFINITY;
        }
        powf(self.a1, q) * (powf(hi, s) - powf(lo, s)) / s
    }

    /// Closed-form moments.
    pub fn moments(&self) -> ExtremizerMoments {
        let p = self.params.p().get();
        let k = self.k();
        let power = self.power_lp(p, 0.0, k);
        ExtremizerMoments {
            mass: self.power_prefix(k) + self.c * (1.0 - k),
            p_moment: power + powf(self.c, p) * (1.0 - k),
            hardy_lp_on_0k: powf(self.a, p) * power,
        }
    }
}

fn check_range(a: f64, b: f64) -> Result<()> {
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(domain("integration range", a, "0 <= a <= b <= 1"));
    }
    Ok(())
}

impl DecreasingProfile for ExtremizerProfile {
    fn value_at(&self, t: f64) -> Result<f64> {
        self.eval(t)
    }

    fn integral(&self, a: f64, b: f64) -> Result<f64> {
        check_range(a, b)?;
        Ok(self.prefix_unchecked(b) - self.prefix_unchecked(a))
    }

    fn lp_integral(&self, p: f64, a: f64, b: f64) -> Result<f64> {
        check_range(a, b)?;
        let k = self.k();
        let mut total = 0.0;
        if a < k {
            total += self.power_lp(p, a, b.min(k));
        }
        if b > k {
            total += powf(self.c, p) * (b - a.max(k));
        }
        Ok(total)
    }

    fn hardy_lp_integral(&self, p: f64, a: f64, b: f64, q: &QuadratureConfig) -> Result<f64> {
        check_range(a, b)?;
        let k = self.k();
        let mut total = 0.0;
        if a < k {
            total += powf(self.a, p) * self.power_lp(p, a, b.min(k));
        }
        if b > k {
            let lo = a.max(k);
            total += integrate(|t| powf(self.prefix_unchecked(t) / t, p), lo, b, q)?;
        }
        Ok(total)
    }

    fn is_non_increasing(&self) -> bool {
        self.a >= 1.0 && self.eval_unchecked(self.k()) >= self.c * (1.0 - 1e-10)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bellman::bellman_value;
    use crate::special::h_p_raw;
    use proptest::prelude::*;

    fn build(p: f64, f: f64, big_f: f64, k: f64) -> ExtremizerProfile {
        let pr = ProblemParams::from_raw(p, f, big_f, k).unwrap();
        build_extremizer(&pr, &RootFindConfig::default()).unwrap()
    }

    #[test]
    fn half_profile_constants() {
        let g = build(2.0, 1.0, 2.0, 0.5);
        let s3 = 3f64.sqrt();
        assert!((g.a() - s3).abs() < 1e-12);
        let b0 = (3.0 - s3) / 2.0;
        assert!((g.a1() - b0 * 0.5f64.powf(-1.0 / s3) / s3).abs() < 1e-12);
        assert!((g.a1() - 0.5461487920456183).abs() < 1e-12);
        assert!((g.c() - (s3 - 1.0)).abs() < 1e-12);
        assert!((g.eval(0.5).unwrap() - (s3 - 1.0)).abs() < 1e-10);
        assert!((g.eval(0.9).unwrap() - (s3 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn degenerate_profile_is_constant() {
        let g = build(2.0, 1.0, 1.0, 0.5);
        assert_eq!((g.a(), g.a1(), g.c()), (1.0, 1.0, 1.0));
        assert_eq!(g.eval(0.3).unwrap(), 1.0);
        let m = g.moments();
        assert_eq!((m.mass, m.p_moment, m.hardy_lp_on_0k), (1.0, 1.0, 0.5));
    }

    #[test]
    fn k_one_profile() {
        let g = build(2.0, 1.0, 2.0, 1.0);
        assert!((g.a() - (1.0 + 0.5f64.sqrt())).abs() < 1e-12);
        assert!((g.a1() - (2.0 - 2f64.sqrt())).abs() < 1e-12);
        let m = g.moments();
        assert!((m.mass - 1.0).abs() < 1e-12);
        assert!((m.p_moment - 2.0).abs() < 1e-12);
        assert!((m.hardy_lp_on_0k - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn moments_match_bellman_value() {
        let g = build(2.0, 1.0, 2.0, 0.5);
        let m = g.moments();
        assert!((m.mass - 1.0).abs() < 1e-12);
        assert!((m.p_moment - 2.0).abs() < 1e-12);
        assert!((m.hardy_lp_on_0k - 3.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn eval_domain() {
        let g = build(2.0, 1.0, 2.0, 0.5);
        assert!(g.eval(0.0).is_err());
        assert!(g.eval(1.5).is_err());
        assert!(g.cell_average(0.5, 0.5).is_err());
    }

    #[test]
    fn trait_integrals_agree_with_quadrature() {
        let g = build(3.0, 1.0, 2.5, 0.4);
        let q = QuadratureConfig::default();
        let lp = g.lp_integral(3.0, 0.2, 0.9).unwrap();
        let num = integrate(|t| g.eval(t).unwrap().powf(3.0), 0.2, 0.4, &q).unwrap()
            + integrate(|t| g.eval(t).unwrap().powf(3.0), 0.4, 0.9, &q).unwrap();
        assert!((lp - num).abs() < 1e-9);
        let hardy = g.hardy_lp_integral(3.0, 0.1, 1.0, &q).unwrap();
        let num = integrate(|t| g.hardy_average(t).unwrap().powf(3.0), 0.1, 0.4, &q).unwrap()
            + integrate(|t| g.hardy_average(t).unwrap().powf(3.0), 0.4, 1.0, &q).unwrap();
        assert!((hardy - num).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn identities_hold(p in 1.2f64..6.0, f in 0.3f64..3.0, gap in 0.01f64..3.0, k in 0.02f64..1.0) {
            let big_f = f.powf(p) * (1.0 + gap);
            let pr = ProblemParams::from_raw(p, f, big_f, k).unwrap();
            let c = RootFindConfig::default();
            let g = build_extremizer(&pr, &c).unwrap();
            let m = g.moments();
            prop_assert!((m.mass - f).abs() <= 1e-9 * f.max(1.0));
            prop_assert!((m.p_moment - big_f).abs() <= 1e-9 * big_f.max(1.0));
            let b = bellman_value(&pr, &c).unwrap();
            prop_assert!((m.hardy_lp_on_0k - b).abs() <= 1e-9 * b.max(1.0));
            prop_assert!(g.a() >= 1.0 && g.a() <= p / (p - 1.0));
            prop_assert!((h_p_raw(p, g.a()) - g.z0()).abs() <= 1e-10);
            prop_assert!((g.prefix_integral(k).unwrap() - g.b0()).abs() <= 1e-12 * f.max(1.0));
            let left = g.eval(k).unwrap();
            prop_assert!((left - g.c()).abs() <= 1e-10 * g.c().max(1.0));
            prop_assert!(g.is_non_increasing());
            for i in 1..=50 {
                let t = k * i as f64 / 50.0;
                let avg = g.hardy_average(t).unwrap();
                let v = g.eval(t).unwrap();
                prop_assert!((avg - g.a() * v).abs() <= 1e-10 * avg.max(1.0));
            }
        }
    }
}
