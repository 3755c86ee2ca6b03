use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{what}: argument {value} outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    /// Invalid problem or configuration parameters.
    #[error("invalid parameter: {0}")]
    Parameter(&'static str),
    /// A bracketed root finder did not converge within its iteration budget.
    #[error("root finder did not converge after {iterations} iterations (bracket [{lo}, {hi}])")]
    NoConvergence { iterations: u32, lo: f64, hi: f64 },
    /// The function values at the bracket endpoints have the same sign.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// The quadrature subdivision budget was exhausted.
    #[error("quadrature on [{lo}, {hi}] exhausted {subdivisions} subdivisions")]
    Quadrature { lo: f64, hi: f64, subdivisions: u32 },
    /// The closed degenerate branch `F = f^p` must be used instead.
    #[error("degenerate parameters (F = f^p): the value is k f^p")]
    Degenerate,
    /// Carleson weights violate the packing or total-mass condition.
    #[error("invalid Carleson weights: {0}")]
    InvalidWeights(&'static str),
    /// Division by a vanishing tail integral.
    #[error("vanishing integral: {0}")]
    ZeroIntegral(&'static str),
    /// The precondition `δ_k ≤ ω_p(f^p/F)` does not hold.
    #[error("precondition δ_k = {delta} ≤ ω_p(f^p/F) = {bound} violated")]
    Precondition { delta: f64, bound: f64 },
    /// A profile that must be non-increasing is not.
    #[error("profile is not non-increasing")]
    NotMonotone,
    /// Malformed input data (step functions, masks, CSV cells).
    #[error("malformed input: {0}")]
    Malformed(&'static str),
}

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
