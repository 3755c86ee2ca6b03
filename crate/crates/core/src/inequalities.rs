//! Margins (right side minus left side, or vice versa, so that a valid
//! inequality has a nonnegative margin) of the sharp inequalities satisfied
//! by the dyadic maximal operator, and the optimal parameter choice for the
//! rearranged form.

use crate::dyadic::{DyadicSet, DyadicStepFunction};
use crate::error::{domain, Error, Result};
use crate::fmath::powf;
use crate::profile::DecreasingProfile;
use crate::quadrature::QuadratureConfig;
use crate::roots::RootFindConfig;
use crate::special::{h_p_raw, omega_p, Exponent};
use crate::stepfn::delta_stat;

/// Relative slack on `δ_k ≤ ω_p(f^p/F)`, so that equality cases are not
/// rejected for rounding.
pub const PRECONDITION_REL_TOL: f64 = 1e-12;

/// `φ`, its moments and `M_𝒯φ`, computed once per function.
#[derive(Debug, Clone)]
pub struct MaximalData {
    p: f64,
    mean: f64,
    moment: f64,
    phi: DyadicStepFunction,
    maximal: DyadicStepFunction,
    maximal_moment: f64,
}

impl MaximalData {
    pub fn new(phi: &DyadicStepFunction, p: Exponent) -> Self {
        let p = p.get();
        let maximal = phi.maximal_operator();
        MaximalData {
            p,
            mean: phi.mean(),
            moment: phi.lp_moment(p),
            maximal_moment: maximal.lp_moment(p),
            phi: phi.clone(),
            maximal,
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }
    pub fn moment(&self) -> f64 {
        self.moment
    }
    /// `∫_X (M_𝒯φ)^p`.
    pub fn maximal_moment(&self) -> f64 {
        self.maximal_moment
    }
    pub fn maximal(&self) -> &DyadicStepFunction {
        &self.maximal
    }
    pub fn phi(&self) -> &DyadicStepFunction {
        &self.phi
    }

    /// `F - f^p/(β+1)^{p-1} - (p-1)β/(β+1)^p ∫_X (Mφ)^p`.
    pub fn margin_1_10(&self, beta: f64) -> Result<f64> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(domain("beta", beta, "beta > 0"));
        }
        let p = self.p;
        let b1 = beta + 1.0;
        let rhs = powf(self.mean, p) / powf(b1, p - 1.0) + (p - 1.0) * beta / powf(b1, p) * self.maximal_moment;
        Ok(self.moment - rhs)
    }

    /// The margin of the inequality with a set `K`:
    ///
    /// ```text
    /// F - [1 - (1+γ)^{1-p}] ∫_K φ^p - f^p/(β+1)^{p-1}
    ///   - (p-1)β/(β+1)^p ∫_X (Mφ)^p + (p-1)γ/(β+1)^p ∫_K (Mφ)^p
    /// ```
    ///
    /// It is evaluated as the `γ = 0` margin minus the `γ` terms, so `γ = 0`
    /// reproduces [`margin_1_10`](Self::margin_1_10) exactly.
    pub fn margin_1_11(&self, set: &DyadicSet, beta: f64, gamma: f64) -> Result<f64> {
        if !(gamma >= 0.0 && gamma <= beta) {
            return Err(Error::Parameter("requires beta >= gamma >= 0"));
        }
        let base = self.margin_1_10(beta)?;
        let p = self.p;
        let on_k = self.phi.integral_over(set, p)?;
        let max_on_k = self.maximal.integral_over(set, p)?;
        let extra = (1.0 - powf(1.0 + gamma, 1.0 - p)) * on_k - (p - 1.0) * gamma / powf(beta + 1.0, p) * max_on_k;
        Ok(base - extra)
    }
}

/// See [`MaximalData::margin_1_10`].
pub fn check_ineq_1_10(phi: &DyadicStepFunction, p: Exponent, beta: f64) -> Result<f64> {
    MaximalData::new(phi, p).margin_1_10(beta)
}

/// See [`MaximalData::margin_1_11`].
pub fn check_ineq_1_11(phi: &DyadicStepFunction, set: &DyadicSet, p: Exponent, beta: f64, gamma: f64) -> Result<f64> {
    MaximalData::new(phi, p).margin_1_11(set, beta, gamma)
}

/// The integrals of a non-increasing `h` split at `k`, and `δ_k`, `δ'_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitIntegrals {
    pub p: Exponent,
    pub k: f64,
    /// `∫_0^1 h`.
    pub f: f64,
    /// `∫_0^1 h^p`.
    pub big_f: f64,
    /// `∫_0^k h^p`.
    pub a0k: f64,
    /// `∫_k^1 h^p`.
    pub ak1: f64,
    /// `∫_0^k Hardy(h)^p`.
    pub j0k: f64,
    /// `∫_k^1 Hardy(h)^p`.
    pub jk1: f64,
    pub delta: f64,
    pub delta_prime: f64,
}

impl SplitIntegrals {
    pub fn new<P: DecreasingProfile + ?Sized>(h: &P, p: Exponent, k: f64, q: &QuadratureConfig) -> Result<Self> {
        let pv = p.get();
        let (delta, delta_prime) = delta_stat(h, pv, k, q)?;
        let a0k = h.lp_integral(pv, 0.0, k)?;
        let ak1 = h.lp_integral(pv, k, 1.0)?;
        Ok(SplitIntegrals {
            p,
            k,
            f: h.integral(0.0, 1.0)?,
            big_f: a0k + ak1,
            a0k,
            ak1,
            j0k: h.hardy_lp_integral(pv, 0.0, k, q)?,
            jk1: h.hardy_lp_integral(pv, k, 1.0, q)?,
            delta,
            delta_prime,
        })
    }

    fn f_pow(&self) -> f64 {
        powf(self.f, self.p.get())
    }

    /// `ω_p(f^p/F)`.
    pub fn delta_bound(&self, cfg: &RootFindConfig) -> Result<f64> {
        omega_p(self.p, (self.f_pow() / self.big_f).min(1.0), cfg)
    }

    /// Whether `δ_k ≤ ω_p(f^p/F)` (up to [`PRECONDITION_REL_TOL`]).
    pub fn precondition_holds(&self, cfg: &RootFindConfig) -> Result<bool> {
        Ok(self.delta <= self.delta_bound(cfg)? * (1.0 + PRECONDITION_REL_TOL))
    }

    fn require_precondition(&self, cfg: &RootFindConfig) -> Result<()> {
        let bound = self.delta_bound(cfg)?;
        if self.delta > bound * (1.0 + PRECONDITION_REL_TOL) {
            return Err(Error::Precondition {
                delta: self.delta,
                bound,
            });
        }
        Ok(())
    }

    /// `(f^p - H_p(δ) ∫_0^k h^p) / ∫_k^1 h^p`, clamped to at most `1`.
    pub fn tail_argument(&self) -> f64 {
        let h = h_p_raw(self.p.get(), self.delta);
        ((self.f_pow() - h * self.a0k) / self.ak1).min(1.0)
    }

    /// `∫_k^1 h^p ω_p(tail_argument)^p - ∫_k^1 Hardy(h)^p`.
    pub fn margin_6_10(&self, cfg: &RootFindConfig) -> Result<f64> {
        self.require_precondition(cfg)?;
        let w = omega_p(self.p, self.tail_argument(), cfg)?;
        Ok(self.ak1 * powf(w, self.p.get()) - self.jk1)
    }

    /// `H_p(δ_k) ∫_0^k h^p + H_p(δ'_k) ∫_k^1 h^p - f^p`.
    pub fn margin_6_12(&self, cfg: &RootFindConfig) -> Result<f64> {
        self.require_precondition(cfg)?;
        let p = self.p.get();
        Ok(h_p_raw(p, self.delta) * self.a0k + h_p_raw(p, self.delta_prime) * self.ak1 - self.f_pow())
    }

    /// `β₀` from `H_p(β₀+1) = tail_argument` and `γ₀ = (β₀+1)/δ_k - 1`.
    pub fn optimal_parameters(&self, cfg: &RootFindConfig) -> Result<OptimalParameters> {
        self.require_precondition(cfg)?;
        let beta0 = omega_p(self.p, self.tail_argument(), cfg)? - 1.0;
        let gamma0 = ((beta0 + 1.0) / self.delta - 1.0).max(0.0);
        Ok(OptimalParameters {
            beta0,
            gamma0,
            delta: self.delta,
        })
    }

    /// The margin of the inequality with a set in rearranged form (`K = (0, k]`,
    /// `M_𝒯φ` replaced by the Hardy average of `h`):
    ///
    /// ```text
    /// (p-1)γ/(β+1)^p J_0k + F - f^p/(β+1)^{p-1} + ((1+γ)^{1-p} - 1) A_0k - (p-1)β/(β+1)^p J_01
    /// ```
    pub fn rearranged_margin(&self, beta: f64, gamma: f64) -> f64 {
        let p = self.p.get();
        let b1p = powf(beta + 1.0, p);
        (p - 1.0) * gamma / b1p * self.j0k + self.big_f - self.f_pow() / powf(beta + 1.0, p - 1.0)
            + (powf(1.0 + gamma, 1.0 - p) - 1.0) * self.a0k
            - (p - 1.0) * beta / b1p * (self.j0k + self.jk1)
    }

    /// [`rearranged_margin`](Self::rearranged_margin) scaled by
    /// `(β+1)^p / ((p-1)β)`; its minimum over `β > δ-1`, `0 ≤ γ ≤ β` is
    /// attained at the optimal parameters.
    pub fn normalized_margin(&self, beta: f64, gamma: f64) -> f64 {
        let p = self.p.get();
        self.rearranged_margin(beta, gamma) * powf(beta + 1.0, p) / ((p - 1.0) * beta)
    }

    /// `Λ(β) = (β+1)^p/((p-1)β) ∫_k^1 h^p + (β+1)/((p-1)β) (H_p(δ) ∫_0^k h^p - f^p)`.
    pub fn lambda(&self, beta: f64) -> f64 {
        let p = self.p.get();
        let s = (p - 1.0) * beta;
        powf(beta + 1.0, p) / s * self.ak1 + (beta + 1.0) / s * (h_p_raw(p, self.delta) * self.a0k - self.f_pow())
    }
}

/// `(β₀, γ₀)` with `β₀ ≥ γ₀ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalParameters {
    pub beta0: f64,
    pub gamma0: f64,
    pub delta: f64,
}

/// See [`SplitIntegrals::margin_6_10`].
pub fn check_ineq_6_10<P: DecreasingProfile + ?Sized>(
    h: &P,
    p: Exponent,
    k: f64,
    q: &QuadratureConfig,
    cfg: &RootFindConfig,
) -> Result<f64> {
    SplitIntegrals::new(h, p, k, q)?.margin_6_10(cfg)
}

/// See [`SplitIntegrals::margin_6_12`].
pub fn check_ineq_6_12<P: DecreasingProfile + ?Sized>(
    h: &P,
    p: Exponent,
    k: f64,
    q: &QuadratureConfig,
    cfg: &RootFindConfig,
) -> Result<f64> {
    SplitIntegrals::new(h, p, k, q)?.margin_6_12(cfg)
}

/// See [`SplitIntegrals::optimal_parameters`].
pub fn optimal_parameters<P: DecreasingProfile + ?Sized>(
    h: &P,
    p: Exponent,
    k: f64,
    q: &QuadratureConfig,
    cfg: &RootFindConfig,
) -> Result<OptimalParameters> {
    SplitIntegrals::new(h, p, k, q)?.optimal_parameters(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bellman::ProblemParams;
    use crate::extremizer::build_extremizer;
    use crate::stepfn::StepFunction;
    use alloc::vec;

    fn two() -> Exponent {
        Exponent::new(2.0).unwrap()
    }

    fn cfgs() -> (QuadratureConfig, RootFindConfig) {
        (QuadratureConfig::default(), RootFindConfig::default())
    }

    #[test]
    fn ineq_1_10_examples() {
        let phi = DyadicStepFunction::new(1, vec![2.0, 0.0]).unwrap();
        assert!((check_ineq_1_10(&phi, two(), 1.0).unwrap() - 0.875).abs() < 1e-15);
        let p = Exponent::new(3.0).unwrap();
        let c = DyadicStepFunction::constant(3, 1.2).unwrap();
        for beta in [0.1, 1.0, 4.0] {
            let b1: f64 = beta + 1.0;
            let want = 1.2f64.powi(3) * (1.0 - 1.0 / b1.powi(2) - 2.0 * beta / b1.powi(3));
            let got = check_ineq_1_10(&c, p, beta).unwrap();
            assert!((got - want).abs() < 1e-14 && got >= 0.0);
        }
        assert!(check_ineq_1_10(&c, p, 0.0).is_err());
    }

    #[test]
    fn ineq_1_11_examples() {
        let phi = DyadicStepFunction::new(1, vec![2.0, 0.0]).unwrap();
        let k1 = DyadicSet::new(1, vec![false, true]).unwrap();
        // ∫_K φ² = 0, ∫_X (Mφ)² = 2.5, ∫_K (Mφ)² = 0.5
        let m = check_ineq_1_11(&phi, &k1, two(), 1.0, 0.5).unwrap();
        assert!((m - 0.9375).abs() < 1e-15);
        let c = DyadicStepFunction::constant(2, 1.7).unwrap();
        let full = DyadicSet::full(2).unwrap();
        assert!(check_ineq_1_11(&c, &full, two(), 1.0, 1.0).unwrap().abs() < 1e-14);
        let data = MaximalData::new(&phi, two());
        assert_eq!(data.margin_1_11(&k1, 0.7, 0.0).unwrap(), data.margin_1_10(0.7).unwrap());
        assert!(data.margin_1_11(&k1, 0.5, 0.7).is_err());
        assert!(data.margin_1_11(&k1, 0.5, -0.1).is_err());
    }

    #[test]
    fn constant_profile_equalities() {
        let (q, cfg) = cfgs();
        let c = StepFunction::constant(1.3).unwrap();
        let p = Exponent::new(2.5).unwrap();
        assert!(check_ineq_6_10(&c, p, 0.4, &q, &cfg).unwrap().abs() < 1e-12);
        assert!(check_ineq_6_12(&c, p, 0.4, &q, &cfg).unwrap().abs() < 1e-12);
        let opt = optimal_parameters(&c, two(), 0.5, &q, &cfg).unwrap();
        assert_eq!((opt.beta0, opt.gamma0), (0.0, 0.0));
    }

    #[test]
    fn analytic_g1_equalities() {
        let (q, cfg) = cfgs();
        let g1 = build_extremizer(&ProblemParams::from_raw(2.0, 1.0, 2.0, 1.0).unwrap(), &cfg).unwrap();
        let a = 1.0 + 0.5f64.sqrt();
        for k in [0.1, 0.3, 0.5, 0.9] {
            let s = SplitIntegrals::new(&g1, two(), k, &q).unwrap();
            assert!((s.delta - a).abs() < 1e-9 && (s.delta_prime - a).abs() < 1e-9);
            assert!(s.margin_6_10(&cfg).unwrap().abs() < 1e-6);
            assert!(s.margin_6_12(&cfg).unwrap().abs() < 1e-6);
        }
        let opt = optimal_parameters(&g1, two(), 0.5, &q, &cfg).unwrap();
        assert!((opt.beta0 - (a - 1.0)).abs() < 1e-8);
        assert!(opt.gamma0.abs() < 1e-8);
    }

    #[test]
    fn lambda_matches_optimized_rearranged_margin() {
        let (q, cfg) = cfgs();
        let h = StepFunction::new(vec![0.0, 0.1, 0.4, 1.0], vec![3.0, 1.5, 0.6]).unwrap();
        let p = Exponent::new(2.0).unwrap();
        let s = SplitIntegrals::new(&h, p, 0.25, &q).unwrap();
        assert!(s.precondition_holds(&cfg).unwrap());
        let opt = s.optimal_parameters(&cfg).unwrap();
        assert!(opt.beta0 >= opt.gamma0 && opt.gamma0 >= 0.0);
        // J_01 - J_0k at the optimum of the scaled margin is Λ(β₀)
        let n = s.normalized_margin(opt.beta0, opt.gamma0);
        let via_lambda = s.j0k + s.lambda(opt.beta0) - (s.j0k + s.jk1);
        assert!((n - via_lambda).abs() < 1e-9 * n.abs().max(1.0));
        // and the minimum over a grid is not below it
        for i in 1..60 {
            let beta = opt.delta - 1.0 + 0.05 * i as f64;
            for jj in 0..=20 {
                let gamma = beta * jj as f64 / 20.0;
                assert!(s.normalized_margin(beta, gamma) >= n - 1e-9);
            }
        }
    }

    #[test]
    fn precondition_failure_reported() {
        let (q, cfg) = cfgs();
        // a small spike: steep on (0, k] but nearly constant overall
        let h = StepFunction::new(vec![0.0, 1e-4, 2e-4, 1.0], vec![10.0, 1.0, 1.0]).unwrap();
        let s = SplitIntegrals::new(&h, two(), 2e-4, &q).unwrap();
        assert!(!s.precondition_holds(&cfg).unwrap());
        assert!(matches!(s.margin_6_10(&cfg), Err(Error::Precondition { .. })));
    }
}
