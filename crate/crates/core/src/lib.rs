//! Exact rearrangement calculus for sampled functions.
//!
//! A [`GridFunction`] is a nonnegative piecewise-constant function on a
//! uniform n-dimensional grid, extended by zero. Everything built on top of it
//! is computed in closed form wherever the piecewise-constant structure
//! allows it:
//!
//! - [`rearrange`]: distribution functions, the nonincreasing rearrangement
//!   `f*` as an exact [`StepFunction`], axis and iterated rearrangements.
//! - [`moduli`]: shift-difference norms, partial moduli of continuity,
//!   Steklov means and the modulus-of-continuity axioms.
//! - [`norms`]: Lorentz, mixed Lorentz, Besov, Lipschitz and Gagliardo
//!   functionals plus the anisotropic exponent algebra.
//! - [`geometry`]: superlevel sets, projections, Loomis–Whitney counting,
//!   minimal-projection chains, the anisotropic gauge and the dyadic box
//!   averaging operator.
//! - [`verify`]: inequality verifiers producing [`InequalityReport`]s.
//! - [`runner`]: the config-driven experiment runner behind the `agf` binary.
//!
//! Runnable walkthroughs live in `examples/`, one per capability.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod budget;
pub mod config;
pub mod corpus;
mod error;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod moduli;
pub mod norms;
mod quad;
pub mod rearrange;
pub mod report;
pub mod runner;
pub mod step;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{AxisDomain, GridFunction, MeasureLattice};
pub use rearrange::Permutation;
pub use report::{InequalityReport, LimitTrace, Verdict};
pub use step::StepFunction;
