//! The function `H_p(z) = p z^{p-1} - (p-1) z^p`, its inverse `ω_p`, the
//! derived `U_p(x) = ω_p(x)^p / x`, and the root `ω_{p,k}(θ)` that pins down
//! the optimizer of the Bellman function.
//!
//! `H_p` is strictly decreasing on `[1, ∞)` with `H_p(1) = 1`,
//! `H_p(p/(p-1)) = 0` and `H_p(z) → -∞`. Near `z = 1` it has a double
//! contact with the level `1` (`H_p'(1) = 0`), so the inverse is solved in
//! the shifted variable `u = z - 1` against `1 - x`, which keeps full relative
//! precision close to `x = 1`.

use crate::error::{domain, Error, Result};
use crate::fmath::{exp_m1, ln_1p, powf};
use crate::roots::{solve_bracketed, RootFindConfig};

/// Exponents closer to 1 than this are rejected; `p/(p-1)` blows up there.
pub const MIN_EXPONENT_GAP: f64 = 1e-6;

/// An exponent `p > 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 1.0 + MIN_EXPONENT_GAP {
            return Err(domain("exponent", p, "p > 1 + 1e-6"));
        }
        Ok(Exponent(p))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// The Hölder conjugate `p/(p-1)`, the Doob constant of the maximal operator.
    #[inline]
    pub fn conjugate(self) -> f64 {
        self.0 / (self.0 - 1.0)
    }
}

impl TryFrom<f64> for Exponent {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Exponent::new(p)
    }
}

/// `H_p(z)` for `z ≥ 1`.
pub fn h_p(p: Exponent, z: f64) -> Result<f64> {
    if !(z >= 1.0) {
        return Err(domain("H_p", z, "z >= 1"));
    }
    Ok(h_p_raw(p.get(), z))
}

/// Unchecked `H_p`, clamped to its supremum `1`.
#[inline]
pub(crate) fn h_p_raw(p: f64, z: f64) -> f64 {
    if z == 1.0 {
        return 1.0;
    }
    (powf(z, p - 1.0) * (p - (p - 1.0) * z)).min(1.0)
}

/// `1 - H_p(1 + u)` for `u ≥ 0`, accurate to relative precision near `u = 0`.
#[inline]
fn one_minus_h(p: f64, u: f64) -> f64 {
    let q = p - 1.0;
    let e = exp_m1(q * ln_1p(u));
    (q * u - e) + q * u * e
}

/// `d/du (1 - H_p(1 + u)) = p (p-1) (1+u)^{p-2} u`.
#[inline]
fn one_minus_h_deriv(p: f64, u: f64) -> f64 {
    p * (p - 1.0) * powf(1.0 + u, p - 2.0) * u
}

/// `ω_p(x)`: the unique `z ≥ 1` with `H_p(z) = x`, for any `x ≤ 1`.
///
/// For `x ∈ [0, 1]` the result lies in `[1, p/(p-1)]`; negative `x` uses the
/// extended branch with values above `p/(p-1)`.
pub fn omega_p(p: Exponent, x: f64, cfg: &RootFindConfig) -> Result<f64> {
    if !(x <= 1.0) {
        return Err(domain("omega_p", x, "x <= 1"));
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let pv = p.get();
    let target = 1.0 - x;
    let mut u_hi = 1.0 / (pv - 1.0);
    if x < 0.0 {
        let mut z_hi = p.conjugate();
        while h_p_raw(pv, z_hi) >= x {
            z_hi *= 2.0;
            if !z_hi.is_finite() {
                return Err(domain("omega_p", x, "x with finite preimage"));
            }
        }
        u_hi = z_hi - 1.0;
    } else if one_minus_h(pv, u_hi) <= target {
        // x is zero up to the rounding of H_p at p/(p-1)
        return Ok(p.conjugate());
    }
    let u = solve_bracketed(
        |u| (one_minus_h(pv, u) - target, one_minus_h_deriv(pv, u)),
        0.0,
        u_hi,
        cfg,
    )?;
    Ok(1.0 + u)
}

/// `U_p(x) = ω_p(x)^p / x` on `(0, 1]`.
pub fn u_p(p: Exponent, x: f64, cfg: &RootFindConfig) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(domain("U_p", x, "0 < x <= 1"));
    }
    Ok(powf(omega_p(p, x, cfg)?, p.get()) / x)
}

/// `z σ(z)` in the shifted variable `u = z - 1`, with its `u`-derivative.
///
/// `σ(z) = -(p-1) z^p + (p-1+k) z^{p-1} - θ [1 + (1-k)((p-1)/z - p)]`; the
/// product with `z` is a polynomial-like expression without the `1/z` pole.
fn z_sigma(p: f64, k: f64, theta: f64, u: f64) -> (f64, f64) {
    let z = 1.0 + u;
    let zp1 = powf(z, p - 1.0);
    let lin = k - (p - 1.0) * u;
    let slope_q = 1.0 - p + p * k;
    let value = zp1 * z * lin - theta * (k + u * slope_q);
    let deriv = p * zp1 * lin - (p - 1.0) * zp1 * z - theta * slope_q;
    (value, deriv)
}

/// `σ(z)` itself, for residual checks.
pub fn sigma(p: Exponent, k: f64, theta: f64, z: f64) -> f64 {
    let pv = p.get();
    -(pv - 1.0) * powf(z, pv) + (pv - 1.0 + k) * powf(z, pv - 1.0)
        - theta * (1.0 + (1.0 - k) * ((pv - 1.0) / z - pv))
}

/// `ω_{p,k}(θ)`: the unique root of `σ` in `[1, 1 + k/(p-1)]`.
pub fn omega_pk(p: Exponent, k: f64, theta: f64, cfg: &RootFindConfig) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(domain("omega_pk", k, "0 < k < 1"));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(domain("omega_pk", theta, "0 <= theta <= 1"));
    }
    let pv = p.get();
    let u_hi = k / (pv - 1.0);
    if theta == 0.0 {
        return Ok(1.0 + u_hi);
    }
    if theta == 1.0 {
        return Ok(1.0);
    }
    // σ(1) = k(1-θ) > 0 and σ(1 + k/(p-1)) < 0; a sign flip at an endpoint is
    // rounding noise next to the unique root there.
    if z_sigma(pv, k, theta, u_hi).0 >= 0.0 {
        return Ok(1.0 + u_hi);
    }
    if z_sigma(pv, k, theta, 0.0).0 <= 0.0 {
        return Ok(1.0);
    }
    let u = solve_bracketed(|u| z_sigma(pv, k, theta, u), 0.0, u_hi, cfg)?;
    Ok(1.0 + u)
}
