//! The Bellman function `B_p(f, F, k)` of the dyadic maximal operator.
//!
//! For `0 < k < 1` the value is the maximum of
//!
//! ```text
//! ℛ_k(B) = (F - (f-B)^p/(1-k)^{p-1}) · ω_p( B^p / (k^{p-1} (F - (f-B)^p/(1-k)^{p-1})) )^p
//! ```
//!
//! over the interval of split masses `B ∈ [0, f]` with `h_k(B) ≤ F`. The
//! maximizer `B₀` is characterized by `f(1-k)/(f-B₀) = ω_{p,k}(f^p/F)`, so the
//! value costs one scalar root-find. The slices `k = 1` and `F = f^p` have
//! closed forms.

use crate::error::{domain, Error, Result};
use crate::fmath::powf;
use crate::roots::{solve_bracketed, RootFindConfig};
use crate::special::{h_p_raw, omega_p, omega_pk, Exponent};

/// Relative gap `(F - f^p)/F` below which the parameters count as degenerate.
pub const DEGENERATE_REL_TOL: f64 = 1e-12;

/// The quadruple `(p, f, F, k)`: exponent, mean `∫φ`, power moment `∫φ^p`
/// and the measure of the set `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    p: Exponent,
    mean: f64,
    moment: f64,
    k: f64,
}

impl ProblemParams {
    /// Validates `f > 0`, `F > 0`, `f^p ≤ F` (up to [`DEGENERATE_REL_TOL`])
    /// and `0 < k ≤ 1`.
    pub fn new(p: Exponent, mean: f64, moment: f64, k: f64) -> Result<Self> {
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(domain("mean f", mean, "0 < f < inf"));
        }
        if !(moment > 0.0 && moment.is_finite()) {
            return Err(domain("moment F", moment, "0 < F < inf"));
        }
        if !(k > 0.0 && k <= 1.0) {
            return Err(domain("measure k", k, "0 < k <= 1"));
        }
        let fp = powf(mean, p.get());
        if fp - moment > DEGENERATE_REL_TOL * moment {
            return Err(Error::Parameter("Hölder feasibility f^p <= F violated"));
        }
        Ok(ProblemParams {
            p,
            mean,
            moment,
            k,
        })
    }

    /// Convenience constructor from a raw exponent.
    pub fn from_raw(p: f64, mean: f64, moment: f64, k: f64) -> Result<Self> {
        Self::new(Exponent::new(p)?, mean, moment, k)
    }

    #[inline]
    pub fn p(&self) -> Exponent {
        self.p
    }
    #[inline]
    pub fn mean(&self) -> f64 {
        self.mean
    }
    #[inline]
    pub fn moment(&self) -> f64 {
        self.moment
    }
    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    /// `f^p`.
    #[inline]
    pub fn mean_pow(&self) -> f64 {
        powf(self.mean, self.p.get())
    }

    /// `f^p / F`, clamped to `[0, 1]`.
    #[inline]
    pub fn theta(&self) -> f64 {
        (self.mean_pow() / self.moment).min(1.0)
    }

    /// `F = f^p` up to [`DEGENERATE_REL_TOL`]: only constant functions qualify.
    pub fn is_degenerate(&self) -> bool {
        self.moment - self.mean_pow() <= DEGENERATE_REL_TOL * self.moment
    }

    /// The same `(p, f, F)` with a different `k`.
    pub fn with_k(&self, k: f64) -> Result<Self> {
        Self::new(self.p, self.mean, self.moment, k)
    }

    fn require_split(&self) -> Result<()> {
        if self.k >= 1.0 {
            return Err(Error::Parameter("operation requires k < 1"));
        }
        Ok(())
    }

    /// `(f-B)^p / (1-k)^{p-1}`, the least p-moment of a function with mass
    /// `f - B` on a set of measure `1 - k`.
    #[inline]
    fn outer_moment(&self, b: f64) -> f64 {
        let p = self.p.get();
        powf(self.mean - b, p) / powf(1.0 - self.k, p - 1.0)
    }

    /// `B^p / k^{p-1}`.
    #[inline]
    fn inner_moment(&self, b: f64) -> f64 {
        let p = self.p.get();
        powf(b, p) / powf(self.k, p - 1.0)
    }
}

/// Endpoints `[p₀, p₁]` of the set of feasible split masses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibleDomain {
    pub lo: f64,
    pub hi: f64,
}

impl FeasibleDomain {
    pub fn contains(&self, b: f64) -> bool {
        b >= self.lo && b <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// The maximizer of `ℛ_k` and its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerResult {
    /// `B₀`, the mass of the extremal function on `K`.
    pub b0: f64,
    /// `Z₀ = B₀^p / (k^{p-1} (F - (f-B₀)^p/(1-k)^{p-1}))`, the argument of `ω_p`.
    pub z0: f64,
    /// `ℛ_k(B₀)`.
    pub value: f64,
    /// `ω_p(Z₀)`.
    pub a: f64,
    /// `|H_p((B₀/k)(1-k)/(f-B₀)) - Z₀|`.
    pub consistency_residual: f64,
    /// `(kf, f pk/(p-1+k))`, the image of the `ω_{p,k}` bracket.
    pub bracket: (f64, f64),
}

/// Value of the Bellman function together with the optimizer data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellmanSolution {
    pub value: f64,
    pub b0: f64,
    pub z0: f64,
    pub a: f64,
    pub domain: FeasibleDomain,
}

/// `h_k(B) = (f-B)^p/(1-k)^{p-1} + B^p/k^{p-1}` for `B ∈ [0, f]`, `k < 1`.
pub fn h_k(params: &ProblemParams, b: f64) -> Result<f64> {
    params.require_split()?;
    if !(b >= 0.0 && b <= params.mean) {
        return Err(domain("h_k", b, "0 <= B <= f"));
    }
    Ok(params.outer_moment(b) + params.inner_moment(b))
}

fn h_k_deriv(params: &ProblemParams, b: f64) -> f64 {
    let p = params.p.get();
    let k = params.k;
    p * (powf(b, p - 1.0) / powf(k, p - 1.0)
        - powf(params.mean - b, p - 1.0) / powf(1.0 - k, p - 1.0))
}

/// The interval of `B ∈ [0, f]` with `h_k(B) ≤ F`.
///
/// `h_k` is convex with minimum `f^p` at `B = kf`, so each endpoint is found
/// on its own monotone branch.
pub fn feasible_domain(params: &ProblemParams, cfg: &RootFindConfig) -> Result<FeasibleDomain> {
    params.require_split()?;
    let f = params.mean;
    let kf = params.k * f;
    if params.is_degenerate() {
        return Ok(FeasibleDomain { lo: kf, hi: kf });
    }
    let big_f = params.moment;
    let g = |b: f64| (params.outer_moment(b) + params.inner_moment(b) - big_f, h_k_deriv(params, b));
    let lo = if params.outer_moment(0.0) <= big_f {
        0.0
    } else {
        solve_bracketed(g, 0.0, kf, cfg)?
    };
    let hi = if params.inner_moment(f) <= big_f {
        f
    } else {
        solve_bracketed(g, kf, f, cfg)?
    };
    Ok(FeasibleDomain { lo, hi })
}

/// `ℛ_k(B)` for a feasible `B`.
pub fn r_k(params: &ProblemParams, b: f64, cfg: &RootFindConfig) -> Result<f64> {
    let h = h_k(params, b)?;
    if h - params.moment > DEGENERATE_REL_TOL * params.moment {
        return Err(domain("R_k", b, "B with h_k(B) <= F"));
    }
    let inner = params.moment - params.outer_moment(b);
    if inner <= 0.0 {
        return Ok(0.0);
    }
    let arg = (params.inner_moment(b) / inner).clamp(0.0, 1.0);
    Ok(inner * powf(omega_p(params.p, arg, cfg)?, params.p.get()))
}

/// The maximizer `B₀` of `ℛ_k` for non-degenerate parameters with `k < 1`.
pub fn solve_b0(params: &ProblemParams, cfg: &RootFindConfig) -> Result<OptimizerResult> {
    params.require_split()?;
    if params.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let p = params.p.get();
    let (f, k) = (params.mean, params.k);
    let w = omega_pk(params.p, k, params.theta(), cfg)?;
    let b0 = f - f * (1.0 - k) / w;
    let inner = params.moment - params.outer_moment(b0);
    let z0 = (params.inner_moment(b0) / inner).clamp(0.0, 1.0);
    let a = omega_p(params.p, z0, cfg)?;
    let value = inner * powf(a, p);
    let ratio = (b0 / k) * (1.0 - k) / (f - b0);
    let consistency_residual = if ratio >= 1.0 {
        (h_p_raw(p, ratio) - z0).abs()
    } else {
        f64::INFINITY
    };
    Ok(OptimizerResult {
        b0,
        z0,
        value,
        a,
        consistency_residual,
        bracket: (k * f, f * p * k / (p - 1.0 + k)),
    })
}

/// `B_p(f, F, k)` with optimizer diagnostics.
pub fn solve(params: &ProblemParams, cfg: &RootFindConfig) -> Result<BellmanSolution> {
    let (f, k) = (params.mean, params.k);
    if params.is_degenerate() {
        return Ok(BellmanSolution {
            value: k * params.mean_pow(),
            b0: k * f,
            z0: 1.0,
            a: 1.0,
            domain: FeasibleDomain { lo: k * f, hi: k * f },
        });
    }
    if k == 1.0 {
        let z0 = params.theta();
        let a = omega_p(params.p, z0, cfg)?;
        return Ok(BellmanSolution {
            value: params.moment * powf(a, params.p.get()),
            b0: f,
            z0,
            a,
            domain: FeasibleDomain { lo: f, hi: f },
        });
    }
    let opt = solve_b0(params, cfg)?;
    Ok(BellmanSolution {
        value: opt.value,
        b0: opt.b0,
        z0: opt.z0,
        a: opt.a,
        domain: feasible_domain(params, cfg)?,
    })
}

/// `B_p(f, F, k)`.
pub fn bellman_value(params: &ProblemParams, cfg: &RootFindConfig) -> Result<f64> {
    let (f, k) = (params.mean, params.k);
    if params.is_degenerate() {
        return Ok(k * powf(f, params.p.get()));
    }
    if k == 1.0 {
        let a = omega_p(params.p, params.theta(), cfg)?;
        return Ok(params.moment * powf(a, params.p.get()));
    }
    Ok(solve_b0(params, cfg)?.value)
}
