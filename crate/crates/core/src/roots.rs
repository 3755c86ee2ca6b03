//! Bracketed root finding: bisection safeguarding Newton steps.

use crate::error::{Error, Result};

/// Tolerances and iteration budget for the bracketed solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootFindConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iterations: u32,
}

impl RootFindConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iterations: u32) -> Result<Self> {
        let cfg = RootFindConfig {
            abs_tol,
            rel_tol,
            max_iterations,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Parameter("abs_tol must be positive"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Parameter("rel_tol must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::Parameter("max_iterations must be at least 1"));
        }
        Ok(())
    }

    #[inline]
    fn tolerance(&self, x: f64) -> f64 {
        self.abs_tol + self.rel_tol * x.abs()
    }
}

impl Default for RootFindConfig {
    fn default() -> Self {
        RootFindConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_iterations: 200,
        }
    }
}

/// Finds a root of `f` in `[lo, hi]`.
///
/// `f` returns the pair `(value, derivative)`. The endpoint values must not
/// share a strict sign. Each iteration takes a Newton step when it stays
/// inside the current bracket and shrinks fast enough, and a bisection step
/// otherwise, so convergence is guaranteed for continuous `f`.
pub fn solve_bracketed<F>(mut f: F, lo: f64, hi: f64, cfg: &RootFindConfig) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    cfg.validate()?;
    if !(lo <= hi) {
        return Err(Error::Parameter("bracket must satisfy lo <= hi"));
    }
    let (f_lo, _) = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let (f_hi, _) = f(hi);
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    // orient so that f(neg) < 0 < f(pos)
    let (mut neg, mut pos) = if f_lo < 0.0 { (lo, hi) } else { (hi, lo) };

    let mut x = 0.5 * (lo + hi);
    let mut step_old = (hi - lo).abs();
    let mut step = step_old;
    let (mut fx, mut dfx) = f(x);

    for _ in 0..cfg.max_iterations {
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
        let newton_leaves_bracket = ((x - pos) * dfx - fx) * ((x - neg) * dfx - fx) > 0.0;
        let newton_too_slow = (2.0 * fx).abs() > (step_old * dfx).abs();
        if newton_leaves_bracket || newton_too_slow || !dfx.is_finite() || dfx == 0.0 {
            step_old = step;
            let half = 0.5 * (pos - neg);
            let mid = neg + half;
            if mid == x {
                return Ok(x);
            }
            x = mid;
            step = half.abs();
        } else {
            step_old = step;
            let dx = fx / dfx;
            let next = x - dx;
            if next == x {
                return Ok(x);
            }
            x = next;
            step = dx.abs();
        }
        if step < cfg.tolerance(x) || (pos - neg).abs() < cfg.tolerance(x) {
            return Ok(x);
        }
        let (v, d) = f(x);
        fx = v;
        dfx = d;
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iterations,
        lo: neg.min(pos),
        hi: neg.max(pos),
    })
}

/// Plain bisection for functions without a convenient derivative.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, cfg: &RootFindConfig) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    solve_bracketed(|x| (f(x), f64::NAN), lo, hi, cfg)
}
