//! Exact-in-distribution simulation of α-stable subordinators on time grids.
//!
//! A subordinator with index `α ∈ (0, 1)` is normalised so that
//! `E exp(-λ S_t) = exp(-λ^α t)`. Values are produced only at grid points:
//! each increment over `[s, t]` is `(t - s)^{1/α}` times an independent
//! standard draw.

mod grid;
mod params;
mod path;
mod seed;

pub use grid::{GridKind, TimeGrid, DEFAULT_LEVELS};
pub use params::{sample_standard_stable, StableParams, UNIFORM_GUARD};
pub use path::{deterministic_path, sample_path, PathSampler, SubordinatorPath};
pub use seed::{derive_seed, SeedSpec};
