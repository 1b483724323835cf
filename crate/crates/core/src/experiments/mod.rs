//! Monte Carlo drivers that turn the pathwise estimators into statistical
//! verdicts.
//!
//! Replicate `i` of an experiment always draws from
//! `SeedSpec::new(cell_seed, i)`, and per-replicate results are collected in
//! index order before any reduction, so every number reported here is
//! independent of the worker count.

mod blowup;
mod checks;
mod classify;
mod moments;
mod scaling;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use blowup::{
    default_blowup_levels, run_blowup_diagnostic, Regime, SlopeReport, SLOPE_TOLERANCE, STABILIZATION_TOLERANCE,
};
pub use checks::{
    run_frac_moment_chain, run_ibp_consistency, run_ks_check, run_laplace_check, ConvergenceRow, DeterministicCheck,
    FracMomentCell, FracMomentReport, IbpReport, KsReport, LaplaceCell, LaplaceReport, MonteCarloMoment,
};
pub use classify::{classify_power_kernel, KernelClass};
pub use moments::{
    bound_theorem3, bound_theorem4, run_moment_check, BoundCheckReport, EstimatorSide, MomentEstimate, MomentKernel,
    EXP_GRID_INTERVALS,
};
pub use scaling::{run_scaling_check, ScalingPoint, ScalingReport};

use crate::error::{Error, Result};

/// Outcome of a statistical check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The statistic cannot decide the question (e.g. the boundary `θ = 1/α`).
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail)
    }

    /// Combined verdict: any failure fails, otherwise any inconclusive part
    /// makes the whole inconclusive.
    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Inconclusive => out = Verdict::Inconclusive,
                Verdict::Pass => {}
            }
        }
        out
    }
}

/// Thread pool used to evaluate replicates.
#[derive(Clone, Default)]
pub struct Workers {
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl std::fmt::Debug for Workers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Workers").field("threads", &self.threads()).finish()
    }
}

impl Workers {
    /// A dedicated pool with exactly `threads` workers.
    pub fn fixed(threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::domain("worker count must be >= 1"));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
        Ok(Self {
            pool: Some(Arc::new(pool)),
        })
    }

    pub fn from_option(threads: Option<usize>) -> Result<Self> {
        threads.map_or_else(|| Ok(Self::default()), Self::fixed)
    }

    pub fn threads(&self) -> usize {
        self.pool
            .as_ref()
            .map_or_else(rayon::current_num_threads, |p| p.current_num_threads())
    }

    /// `f(0), ..., f(n - 1)` evaluated in parallel, returned in index order.
    pub fn map<T, F>(&self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        let run = || (0..n).into_par_iter().map(&f).collect::<Vec<T>>();
        match &self.pool {
            Some(pool) => pool.install(run),
            None => run(),
        }
    }
}

pub(crate) fn check_replicates(n: u64, min: u64) -> Result<()> {
    if n < min {
        return Err(Error::domain(format!("n_replicates must be >= {min}, got {n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order_across_pool_sizes() {
        let one = Workers::fixed(1).unwrap().map(1000, |i| i * i);
        let four = Workers::fixed(4).unwrap().map(1000, |i| i * i);
        assert_eq!(one, four);
        assert_eq!(one[999], 999 * 999);
        assert!(Workers::fixed(0).is_err());
    }

    #[test]
    fn verdict_combination() {
        use Verdict::*;
        assert_eq!(Verdict::all([Pass, Pass]), Pass);
        assert_eq!(Verdict::all([Pass, Inconclusive]), Inconclusive);
        assert_eq!(Verdict::all([Inconclusive, Fail]), Fail);
    }
}
