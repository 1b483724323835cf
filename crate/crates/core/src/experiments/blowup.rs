use serde::{Deserialize, Serialize};

use super::{check_replicates, Verdict, Workers};
use crate::error::{Error, Result};
use crate::integrals::{stieltjes_bracket, SingularKernel};
use crate::stats::{median_ci_sorted, median_sorted, ols, sorted};
use crate::subordinator::{PathSampler, SeedSpec, StableParams, TimeGrid};

/// Allowed deviation of the fitted divergence slope from `θ - 1/α`.
pub const SLOPE_TOLERANCE: f64 = 0.1;
/// Allowed relative change of the lower-sum median between the two finest
/// truncation levels when `θ < 1/α`.
pub const STABILIZATION_TOLERANCE: f64 = 0.01;

const MIN_REPLICATES: u64 = 100;

/// Position of `θ` relative to the threshold `1/α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `θ < 1/α`: the integral is finite.
    Finite,
    /// `θ = 1/α`: divergent, but the scaled statistic has slope zero.
    Boundary,
    /// `θ > 1/α`.
    Divergent,
}

impl Regime {
    pub fn classify(alpha: f64, theta: f64) -> Regime {
        let critical = 1.0 / alpha;
        if (theta - critical).abs() <= 1e-9 * critical {
            Regime::Boundary
        } else if theta < critical {
            Regime::Finite
        } else {
            Regime::Divergent
        }
    }
}

/// Divergence-rate diagnostic over decreasing truncation levels `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub alpha: f64,
    pub theta: f64,
    pub horizon: f64,
    pub n_replicates: u64,
    /// Strictly decreasing truncation levels.
    pub epsilons: Vec<f64>,
    /// Per-level sample medians of `ε^{-θ} S_ε`.
    pub medians: Vec<f64>,
    pub median_ci_lower: Vec<f64>,
    pub median_ci_upper: Vec<f64>,
    /// Per-level sample medians of the lower sum of `∫_ε^T t^{-θ} dS_t`.
    pub lower_sum_medians: Vec<f64>,
    /// OLS slope of `ln median` against `ln(1/ε)`.
    pub fitted_slope: f64,
    /// `θ - 1/α`: `ε^{-θ} S_ε` has the law of `ε^{1/α - θ} S_1`.
    pub expected_slope: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
    /// OLS slope of `ln(lower-sum median)` against `ln(1/ε)`.
    pub lower_sum_slope: f64,
    /// Relative change of the lower-sum median between consecutive levels.
    pub lower_sum_relative_changes: Vec<f64>,
    pub regime: Regime,
    pub verdict: Verdict,
}

/// Default levels `T·2^{-k}` for `k = 10, ..., 30`.
pub fn default_blowup_levels(horizon: f64) -> Vec<f64> {
    (10..=30).map(|k| horizon * 2f64.powi(-k)).collect()
}

fn dyadic_exponent(horizon: f64, eps: f64) -> Result<usize> {
    let k = (horizon / eps).log2();
    let rounded = k.round();
    if !(rounded >= 1.0) || (k - rounded).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "epsilon level {eps} is not of the form T·2^(-k) with k >= 1 (T = {horizon})"
        )));
    }
    Ok(rounded as usize)
}

/// Medians of `ε^{-θ} S_ε` and of the truncated lower sum across `ε` levels.
///
/// Medians are used throughout: `E S_1 = ∞`, so means of these quantities
/// are meaningless. Divergence (`θ > 1/α`) passes when the fitted slope is
/// within [`SLOPE_TOLERANCE`] of `θ - 1/α`; finiteness (`θ < 1/α`) passes
/// when the lower-sum median moves by less than [`STABILIZATION_TOLERANCE`]
/// between the two finest levels. The boundary `θ = 1/α` is reported as
/// inconclusive.
pub fn run_blowup_diagnostic(
    params: &StableParams,
    theta: f64,
    horizon: f64,
    epsilon_levels: &[f64],
    n_replicates: u64,
    master_seed: u64,
    workers: &Workers,
) -> Result<SlopeReport> {
    check_replicates(n_replicates, MIN_REPLICATES)?;
    if epsilon_levels.len() < 2 {
        return Err(Error::domain("need at least two epsilon levels"));
    }
    if epsilon_levels.windows(2).any(|w| !(w[0] > w[1])) {
        return Err(Error::domain("epsilon levels must be strictly decreasing"));
    }
    let kernel = SingularKernel::new(theta, horizon)?;
    let exponents = epsilon_levels
        .iter()
        .map(|&e| dyadic_exponent(horizon, e))
        .collect::<Result<Vec<_>>>()?;
    let finest = *exponents.last().expect("non-empty");
    let grid = TimeGrid::dyadic(horizon, finest)?;
    // Grid index of each ε level: point T·2^{-k} sits at index finest - k.
    let indices: Vec<usize> = exponents.iter().map(|k| finest - k).collect();
    let sampler = PathSampler::new(*params, grid);
    let levels = epsilon_levels.len();

    let per_replicate = workers.map(n_replicates, |i| -> Result<Vec<(f64, f64)>> {
        let path = sampler.sample(SeedSpec::new(master_seed, i));
        indices
            .iter()
            .zip(epsilon_levels)
            .map(|(&idx, &eps)| {
                let s_eps = path.values()[idx];
                let scaled = if s_eps > 0.0 {
                    (-theta * eps.ln() + s_eps.ln()).exp()
                } else {
                    0.0
                };
                let lower = stieltjes_bracket(&path.tail(idx)?, &kernel)?.lower;
                Ok((scaled, lower))
            })
            .collect()
    });
    let mut scaled = vec![Vec::with_capacity(n_replicates as usize); levels];
    let mut lower = vec![Vec::with_capacity(n_replicates as usize); levels];
    for row in per_replicate {
        for (j, (s, l)) in row?.into_iter().enumerate() {
            scaled[j].push(s);
            lower[j].push(l);
        }
    }

    let mut medians = Vec::with_capacity(levels);
    let mut ci_lo = Vec::with_capacity(levels);
    let mut ci_hi = Vec::with_capacity(levels);
    let mut lower_medians = Vec::with_capacity(levels);
    for j in 0..levels {
        let s = sorted(&scaled[j]);
        medians.push(median_sorted(&s));
        let (lo, hi) = median_ci_sorted(&s);
        ci_lo.push(lo);
        ci_hi.push(hi);
        lower_medians.push(median_sorted(&sorted(&lower[j])));
    }

    let x: Vec<f64> = epsilon_levels.iter().map(|e| -e.ln()).collect();
    let y: Vec<f64> = medians.iter().map(|m| m.ln()).collect();
    let fit = ols(&x, &y);
    let y_lower: Vec<f64> = lower_medians.iter().map(|m| m.ln()).collect();
    let lower_fit = ols(&x, &y_lower);
    let changes: Vec<f64> = lower_medians.windows(2).map(|w| (w[1] - w[0]).abs() / w[0].abs()).collect();

    let expected_slope = theta - params.critical_theta();
    let regime = Regime::classify(params.alpha(), theta);
    let verdict = match regime {
        Regime::Divergent => Verdict::from_bool((fit.slope - expected_slope).abs() <= SLOPE_TOLERANCE),
        Regime::Boundary => Verdict::Inconclusive,
        Regime::Finite => Verdict::from_bool(*changes.last().expect("two levels") < STABILIZATION_TOLERANCE),
    };
    Ok(SlopeReport {
        alpha: params.alpha(),
        theta,
        horizon,
        n_replicates,
        epsilons: epsilon_levels.to_vec(),
        medians,
        median_ci_lower: ci_lo,
        median_ci_upper: ci_hi,
        lower_sum_medians: lower_medians,
        fitted_slope: fit.slope,
        expected_slope,
        residual: fit.residual_rms,
        lower_sum_slope: lower_fit.slope,
        lower_sum_relative_changes: changes,
        regime,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_classification() {
        assert_eq!(Regime::classify(0.5, 2.0), Regime::Boundary);
        assert_eq!(Regime::classify(0.5, 1.0), Regime::Finite);
        assert_eq!(Regime::classify(0.5, 3.0), Regime::Divergent);
        assert_eq!(Regime::classify(0.3, 1.0 / 0.3), Regime::Boundary);
    }

    #[test]
    fn rejects_small_replicate_counts_and_bad_levels() {
        let params = StableParams::new(0.5).unwrap();
        let w = Workers::default();
        let levels = default_blowup_levels(1.0);
        assert!(run_blowup_diagnostic(&params, 3.0, 1.0, &levels, 99, 1, &w).is_err());
        assert!(run_blowup_diagnostic(&params, 3.0, 1.0, &[0.01, 0.001], 100, 1, &w).is_err());
        assert!(run_blowup_diagnostic(&params, 3.0, 1.0, &[0.25, 0.5], 100, 1, &w).is_err());
    }

    #[test]
    fn boundary_is_inconclusive() {
        let params = StableParams::new(0.5).unwrap();
        let r = run_blowup_diagnostic(&params, 2.0, 1.0, &default_blowup_levels(1.0), 400, 3, &Workers::default())
            .unwrap();
        assert_eq!(r.regime, Regime::Boundary);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.expected_slope, 0.0);
        assert!(r.fitted_slope.abs() < 0.1);
    }

    #[test]
    fn divergent_slope_close_to_law() {
        let params = StableParams::new(0.5).unwrap();
        let r = run_blowup_diagnostic(&params, 3.0, 1.0, &default_blowup_levels(1.0), 2000, 5, &Workers::default())
            .unwrap();
        assert!((r.fitted_slope - 1.0).abs() < 0.1, "{}", r.fitted_slope);
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.epsilons.windows(2).all(|w| w[0] > w[1]));
        for j in 0..r.epsilons.len() {
            assert!(r.median_ci_lower[j] <= r.medians[j] && r.medians[j] <= r.median_ci_upper[j]);
        }
    }

    #[test]
    fn finite_lower_sums_are_monotone_in_epsilon() {
        let params = StableParams::new(0.5).unwrap();
        let levels: Vec<f64> = (4..=8).map(|k| 2f64.powi(-5 * k)).collect();
        let r = run_blowup_diagnostic(&params, 1.0, 1.0, &levels, 500, 8, &Workers::default()).unwrap();
        assert_eq!(r.regime, Regime::Finite);
        assert!(r.lower_sum_medians.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(r.verdict, Verdict::Pass);
    }
}
