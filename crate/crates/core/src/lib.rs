//! Bellman function of the dyadic maximal operator.
//!
//! This crate computes `B_p(f, F, k)`, the supremum of `∫_K (Mφ)^p` over
//! nonnegative `φ` on `[0, 1)` with `∫φ = f`, `∫φ^p = F` and `|K| = k`, where
//! `M` is the dyadic maximal operator. It also builds the explicit extremal
//! function `g_k`, and provides exact step-function and dyadic-tree machinery
//! for checking the sharp inequalities attached to this Bellman function.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled. All floating point special functions go through `libm`, so
//! results are bit-identical with and without `std`.
//!
//! Module map:
//!
//! * [`special`]: `H_p`, its inverse `ω_p` (including the extended branch on
//!   `(-∞, 1]`), `U_p` and the root `ω_{p,k}(θ)`.
//! * [`bellman`]: problem parameters, `h_k`, `ℛ_k`, the optimizer `B₀` and
//!   the Bellman value.
//! * [`extremizer`]: the extremal profile `g_k` with closed-form moments.
//! * [`stepfn`]: step functions on `(0, 1]`, rearrangement, Hardy averages
//!   and the `δ_k` statistics.
//! * [`dyadic`]: dyadic step functions, the exact maximal operator, dyadic
//!   sets and discretization of extremal profiles.
//! * [`carleson`]: Carleson weights with the packing condition.
//! * [`inequalities`]: margins of the sharp inequalities and the optimal
//!   parameter selection.
//! * [`sharpness`]: constructive near-extremal sequences.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

mod error;
mod fmath;

pub mod bellman;
pub mod carleson;
pub mod dyadic;
pub mod extremizer;
pub mod inequalities;
pub mod profile;
pub mod quadrature;
pub mod roots;
pub mod sharpness;
pub mod special;
pub mod stepfn;

pub use bellman::{bellman_value, BellmanSolution, FeasibleDomain, OptimizerResult, ProblemParams};
pub use carleson::{CarlesonWeights, Node};
pub use dyadic::{DyadicSet, DyadicStepFunction};
pub use error::{Error, Result};
pub use extremizer::ExtremizerProfile;
pub use profile::DecreasingProfile;
pub use quadrature::QuadratureConfig;
pub use roots::RootFindConfig;
pub use special::Exponent;
pub use stepfn::StepFunction;
