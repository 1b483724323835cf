//! Simulation and Monte Carlo verification of α-stable subordinators and the
//! singular integrals `∫_0^T t^{-θ} dS_t`.
//!
//! The integral is finite almost surely for `θ < 1/α` and infinite for
//! `θ ≥ 1/α`. This crate samples subordinator paths exactly at grid points,
//! brackets the pathwise integrals from below and above, and checks the
//! finiteness threshold and the accompanying `p`-th moment bounds
//! statistically.
//!
//! - [`special_math`]: gamma, Lévy CDF, closed-form and quadrature moments.
//! - [`subordinator`]: stable sampler, grids, seeded paths.
//! - [`integrals`]: Stieltjes, integration-by-parts and dyadic-block estimators.
//! - [`experiments`]: moment bounds, blow-up slopes, scaling and oracle checks.
//! - [`reporting`]: experiment configs, JSON records, CSV series, `verify-all`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod integrals;
pub mod quadrature;
pub mod reporting;
pub mod special_math;
pub mod stats;
pub mod subordinator;

pub use error::{Error, Result};
