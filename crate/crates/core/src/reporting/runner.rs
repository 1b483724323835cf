use std::time::Instant;

use super::config::{ExperimentConfig, ExperimentKind, GridConfig};
use super::record::{ClassifyReport, Outcome, ResultRecord, Series, LIBRARY_VERSION};
use crate::error::Result;
use crate::experiments::{
    classify_power_kernel, default_blowup_levels, run_blowup_diagnostic, run_ibp_consistency, run_ks_check,
    run_laplace_check, run_moment_check, run_scaling_check, MomentKernel, Workers,
};
use crate::integrals::{ExpKernel, SingularKernel};
use crate::subordinator::StableParams;

/// α values of the Laplace grid when no `alpha` is given.
pub const LAPLACE_ALPHAS: [f64; 3] = [0.3, 0.5, 0.7];
/// λ values of the Laplace grid when no `alpha` is given.
pub const LAPLACE_LAMBDAS: [f64; 3] = [0.5, 1.0, 2.0];
/// λ values used when a single `alpha` is checked.
pub const LAPLACE_LAMBDAS_SINGLE_ALPHA: [f64; 9] = [0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0];
pub const DEFAULT_SCALING_TIMES: [f64; 3] = [0.25, 1.0, 4.0];

/// Validates `config`, runs the experiment and assembles its record.
///
/// Invalid configs are returned as errors. Failures inside the experiment are
/// embedded in the record as [`Outcome::Error`] with a failing verdict.
pub fn run(config: &ExperimentConfig, workers: &Workers) -> Result<ResultRecord> {
    config.validate()?;
    let start = Instant::now();
    let (outcome, series) = match dispatch(config, workers) {
        Ok(v) => v,
        Err(e) => (Outcome::Error { message: e.to_string() }, Vec::new()),
    };
    Ok(ResultRecord {
        library_version: LIBRARY_VERSION.to_string(),
        seed: config.master_seed,
        config: config.clone(),
        verdict: outcome.verdict(),
        outcome,
        series,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Re-runs the experiment a record describes.
pub fn rerun(record: &ResultRecord, workers: &Workers) -> Result<ResultRecord> {
    run(&record.config, workers)
}

fn dispatch(c: &ExperimentConfig, workers: &Workers) -> Result<(Outcome, Vec<Series>)> {
    let n = c.n_replicates;
    let seed = c.master_seed;
    match c.experiment {
        ExperimentKind::LaplaceCheck => {
            let (alphas, default_lambdas): (Vec<f64>, &[f64]) = match c.alpha {
                Some(a) => (vec![a], &LAPLACE_LAMBDAS_SINGLE_ALPHA),
                None => (LAPLACE_ALPHAS.to_vec(), &LAPLACE_LAMBDAS),
            };
            let lambdas = c.lambda.map_or_else(|| default_lambdas.to_vec(), |l| vec![l]);
            let r = run_laplace_check(&alphas, &lambdas, n, seed, workers)?;
            let mut s = Series::new("laplace", &["alpha", "lambda", "mean", "std_error", "expected"]);
            for cell in &r.cells {
                s.push(vec![cell.alpha, cell.lambda, cell.mean, cell.std_error, cell.expected]);
            }
            Ok((Outcome::Laplace(r), vec![s]))
        }
        ExperimentKind::CdfCheck => Ok((Outcome::Cdf(run_ks_check(n, seed, workers)?), Vec::new())),
        ExperimentKind::Scaling => {
            let params = StableParams::new(c.require_alpha()?)?;
            let times = c.times.clone().unwrap_or_else(|| DEFAULT_SCALING_TIMES.to_vec());
            let r = run_scaling_check(&params, c.require_p()?, &times, n, seed, workers)?;
            let mut s = Series::new("scaling", &["t", "normalized_moment", "std_error"]);
            for pt in &r.points {
                s.push(vec![pt.t, pt.normalized_moment, pt.std_error]);
            }
            Ok((Outcome::Scaling(r), vec![s]))
        }
        ExperimentKind::MomentBoundTheta => {
            let params = StableParams::new(c.require_alpha()?)?;
            let kernel = MomentKernel::Singular(SingularKernel::new(c.require_theta()?, c.horizon)?);
            let grid = c.resolved_grid()?;
            let r = run_moment_check(&params, &kernel, c.require_p()?, &grid, n, seed, workers)?;
            Ok((Outcome::MomentBound(r), Vec::new()))
        }
        ExperimentKind::MomentBoundExp => {
            let params = StableParams::new(c.require_alpha()?)?;
            let kernel = MomentKernel::Exponential(ExpKernel::new(c.require_lambda()?, c.horizon)?);
            // The dyadic default suits the singular kernel; the smooth
            // exponential kernel gets its own uniform grid unless one is given.
            let grid = if c.grid == GridConfig::default() {
                kernel.default_grid()?
            } else {
                c.resolved_grid()?
            };
            let r = run_moment_check(&params, &kernel, c.require_p()?, &grid, n, seed, workers)?;
            Ok((Outcome::MomentBound(r), Vec::new()))
        }
        ExperimentKind::Blowup => {
            let params = StableParams::new(c.require_alpha()?)?;
            let levels = c
                .epsilon_levels
                .clone()
                .unwrap_or_else(|| default_blowup_levels(c.horizon));
            let r = run_blowup_diagnostic(&params, c.require_theta()?, c.horizon, &levels, n, seed, workers)?;
            let mut scaled = Series::new("blowup", &["epsilon", "median_scaled", "lower_ci", "upper_ci"]);
            let mut sums = Series::new("blowup_lower_sum", &["epsilon", "lower_sum_median"]);
            for (i, &eps) in r.epsilons.iter().enumerate() {
                scaled.push(vec![eps, r.medians[i], r.median_ci_lower[i], r.median_ci_upper[i]]);
                sums.push(vec![eps, r.lower_sum_medians[i]]);
            }
            Ok((Outcome::Blowup(r), vec![scaled, sums]))
        }
        ExperimentKind::IbpConsistency => {
            let params = StableParams::new(c.require_alpha()?)?;
            let r = run_ibp_consistency(&params, c.require_theta()?, c.horizon, n, seed, workers)?;
            let mut s = Series::new("convergence", &["grid_levels", "lower_sum", "upper_sum", "gap"]);
            for row in &r.convergence {
                s.push(vec![row.grid_levels as f64, row.lower_sum, row.upper_sum, row.gap]);
            }
            Ok((Outcome::Ibp(r), vec![s]))
        }
        ExperimentKind::KernelClassify => {
            let alpha = c.require_alpha()?;
            let c_exp = c.require_theta()?;
            let class = classify_power_kernel(alpha, c_exp)?;
            let e = c_exp * alpha;
            let mut s = Series::new("classify_truncation", &["delta", "truncated_integral"]);
            for k in 1..=12 {
                let delta = 10f64.powi(-k);
                // ∫_δ^1 t^{-e} dt
                let value = if (e - 1.0).abs() < 1e-12 {
                    -delta.ln()
                } else {
                    (1.0 - delta.powf(1.0 - e)) / (1.0 - e)
                };
                s.push(vec![delta, value]);
            }
            let report = ClassifyReport {
                alpha,
                c: c_exp,
                integrand_exponent: e,
                class,
            };
            Ok((Outcome::Classify(report), vec![s]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{KernelClass, Verdict};

    fn config(kind: ExperimentKind) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(kind);
        c.n_replicates = 2000;
        c
    }

    #[test]
    fn classify_record() {
        let mut c = config(ExperimentKind::KernelClassify);
        c.alpha = Some(0.5);
        c.theta = Some(2.0);
        let r = run(&c, &Workers::default()).unwrap();
        match &r.outcome {
            Outcome::Classify(rep) => assert_eq!(rep.class, KernelClass::LimsupInfinite),
            other => panic!("{other:?}"),
        }
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.series[0].rows.len(), 12);
    }

    #[test]
    fn moment_bound_record_carries_bound() {
        let mut c = config(ExperimentKind::MomentBoundTheta);
        c.alpha = Some(0.5);
        c.theta = Some(1.0);
        c.p = Some(0.25);
        let r = run(&c, &Workers::default()).unwrap();
        match &r.outcome {
            Outcome::MomentBound(rep) => assert!((rep.bound_value - 11.811_069_891_303_61).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn experiment_errors_are_embedded() {
        let mut c = config(ExperimentKind::Blowup);
        c.alpha = Some(0.5);
        c.theta = Some(3.0);
        c.epsilon_levels = Some(vec![0.3, 0.1]);
        let r = run(&c, &Workers::default()).unwrap();
        assert!(matches!(r.outcome, Outcome::Error { .. }));
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn identical_configs_give_identical_json() {
        let mut c = config(ExperimentKind::Scaling);
        c.alpha = Some(0.5);
        c.p = Some(0.25);
        let a = run(&c, &Workers::fixed(1).unwrap()).unwrap();
        let b = rerun(&a, &Workers::fixed(3).unwrap()).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        let back: ResultRecord = serde_json::from_str(&a.to_json().unwrap()).unwrap();
        assert_eq!(back.config, c);
    }
}
