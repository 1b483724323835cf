//! Distributional and algebraic checks of the sampler and the estimators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::moments::EXP_GRID_INTERVALS;
use super::{check_replicates, Verdict, Workers};
use crate::error::{Error, Result};
use crate::integrals::{
    abel_identity_check, dyadic_block_estimate, exp_kernel_integral, ibp_estimate, stieltjes_bracket, ExpKernel,
    SingularKernel,
};
use crate::special_math::{frac_moment_closed_form, frac_moment_quadrature, levy_half_cdf, FracMomentQuery};
use crate::stats::{ks_statistic_sorted, mean_and_std_error, median, sorted, KS_COEFF_1PCT};
use crate::subordinator::{
    deterministic_path, derive_seed, sample_standard_stable, PathSampler, SeedSpec, StableParams, TimeGrid,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceCell {
    pub alpha: f64,
    pub lambda: f64,
    /// Monte Carlo mean of `e^{-λ S_1}`.
    pub mean: f64,
    pub std_error: f64,
    /// `e^{-λ^α}`.
    pub expected: f64,
    pub within_3se: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceReport {
    pub n_replicates: u64,
    pub cells: Vec<LaplaceCell>,
    pub within_count: usize,
    /// `⌈8/9 · cells⌉`.
    pub required: usize,
    pub verdict: Verdict,
}

/// Compares the empirical Laplace transform of `S_1` with `e^{-λ^α}` on every
/// `(α, λ)` cell, each with independent draws.
pub fn run_laplace_check(
    alphas: &[f64],
    lambdas: &[f64],
    n_replicates: u64,
    master_seed: u64,
    workers: &Workers,
) -> Result<LaplaceReport> {
    check_replicates(n_replicates, 2)?;
    if alphas.is_empty() || lambdas.is_empty() {
        return Err(Error::domain("laplace check needs at least one alpha and one lambda"));
    }
    let mut cells = Vec::with_capacity(alphas.len() * lambdas.len());
    for (ai, &alpha) in alphas.iter().enumerate() {
        let params = StableParams::new(alpha)?;
        for (li, &lambda) in lambdas.iter().enumerate() {
            if !(lambda > 0.0) {
                return Err(Error::domain(format!("lambda must be > 0, got {lambda}")));
            }
            let seed = derive_seed(master_seed, (ai * lambdas.len() + li) as u64);
            let samples = workers.map(n_replicates, |i| {
                (-lambda * sample_standard_stable(&params, SeedSpec::new(seed, i))).exp()
            });
            let (mean, std_error) = mean_and_std_error(&samples);
            let expected = (-lambda.powf(alpha)).exp();
            cells.push(LaplaceCell {
                alpha,
                lambda,
                mean,
                std_error,
                expected,
                within_3se: (mean - expected).abs() <= 3.0 * std_error,
            });
        }
    }
    let within_count = cells.iter().filter(|c| c.within_3se).count();
    let required = (8 * cells.len()).div_ceil(9);
    Ok(LaplaceReport {
        n_replicates,
        cells,
        within_count,
        required,
        verdict: Verdict::from_bool(within_count >= required),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub n_replicates: u64,
    pub statistic: f64,
    /// Asymptotic 1% critical value `1.628 / √n`.
    pub critical_value: f64,
    pub verdict: Verdict,
}

/// Kolmogorov–Smirnov distance between draws at `α = 1/2` and the Lévy CDF.
pub fn run_ks_check(n_replicates: u64, master_seed: u64, workers: &Workers) -> Result<KsReport> {
    check_replicates(n_replicates, 2)?;
    let params = StableParams::new(0.5)?;
    let draws = workers.map(n_replicates, |i| sample_standard_stable(&params, SeedSpec::new(master_seed, i)));
    let statistic = ks_statistic_sorted(&sorted(&draws), |x| levy_half_cdf(x).unwrap_or(0.0));
    let critical_value = KS_COEFF_1PCT / (n_replicates as f64).sqrt();
    Ok(KsReport {
        n_replicates,
        statistic,
        critical_value,
        verdict: Verdict::from_bool(statistic < critical_value),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracMomentCell {
    pub alpha: f64,
    pub p: f64,
    pub t: f64,
    pub closed_form: f64,
    pub quadrature: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloMoment {
    pub alpha: f64,
    pub p: f64,
    pub n_replicates: u64,
    pub mean: f64,
    pub std_error: f64,
    pub oracle: f64,
    /// `|mean - oracle| / std_error`.
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FracMomentReport {
    pub cells: Vec<FracMomentCell>,
    pub max_relative_error: f64,
    pub quadrature_verdict: Verdict,
    pub monte_carlo: MonteCarloMoment,
    pub monte_carlo_verdict: Verdict,
    pub verdict: Verdict,
}

/// Relative agreement required between the closed form and quadrature.
pub const FRAC_MOMENT_AGREEMENT: f64 = 1e-6;

/// Closed form vs quadrature on `α × {α/4, α/2, 3α/4} × t`, then the Monte
/// Carlo moment `E S_1^p` at `(mc_alpha, mc_p)` against the validated oracle.
pub fn run_frac_moment_chain(
    alphas: &[f64],
    times: &[f64],
    mc_alpha: f64,
    mc_p: f64,
    n_replicates: u64,
    master_seed: u64,
    workers: &Workers,
) -> Result<FracMomentReport> {
    check_replicates(n_replicates, 2)?;
    let mut cells = Vec::new();
    for &alpha in alphas {
        for frac in [0.25, 0.5, 0.75] {
            for &t in times {
                let q = FracMomentQuery::new(alpha, frac * alpha, t)?;
                let closed_form = frac_moment_closed_form(&q);
                let quadrature = frac_moment_quadrature(&q)?;
                cells.push(FracMomentCell {
                    alpha,
                    p: q.p(),
                    t,
                    closed_form,
                    quadrature,
                    relative_error: ((closed_form - quadrature) / quadrature).abs(),
                });
            }
        }
    }
    let max_relative_error = cells.iter().map(|c| c.relative_error).fold(0.0, f64::max);

    let q = FracMomentQuery::new(mc_alpha, mc_p, 1.0)?;
    let oracle = frac_moment_quadrature(&q)?;
    let params = StableParams::new(mc_alpha)?;
    let samples = workers.map(n_replicates, |i| {
        sample_standard_stable(&params, SeedSpec::new(master_seed, i)).powf(mc_p)
    });
    let (mean, std_error) = mean_and_std_error(&samples);
    let z = (mean - oracle).abs() / std_error;
    let quadrature_verdict = Verdict::from_bool(max_relative_error <= FRAC_MOMENT_AGREEMENT);
    let monte_carlo_verdict = Verdict::from_bool(z <= 3.0);
    Ok(FracMomentReport {
        cells,
        max_relative_error,
        quadrature_verdict,
        monte_carlo: MonteCarloMoment {
            alpha: mc_alpha,
            p: mc_p,
            n_replicates,
            mean,
            std_error,
            oracle,
            z,
        },
        monte_carlo_verdict,
        verdict: Verdict::all([quadrature_verdict, monte_carlo_verdict]),
    })
}

/// A classical integral reproduced on the deterministic path `S_t = t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterministicCheck {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    /// Exact integral over `[ε, T]`.
    pub exact_truncated: f64,
    /// Exact integral over `[0, T]`.
    pub exact_full: f64,
    /// Truncated value inside the bracket and full value within one gap of it.
    pub verdict: Verdict,
}

/// Medians over replicates at one grid resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub grid_levels: usize,
    pub lower_sum: f64,
    pub upper_sum: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IbpReport {
    pub alpha: f64,
    pub theta: f64,
    pub horizon: f64,
    pub n_paths: u64,
    /// Paths whose integration-by-parts and Stieltjes brackets overlap.
    pub intersecting: u64,
    /// Largest relative Abel summation residual over the random `(path, θ)` pairs.
    pub max_abel_relative: f64,
    /// Paths on which the dyadic block sum dominates `(time integral)^p`, `p = α/2`.
    pub dyadic_dominating: u64,
    pub deterministic: Vec<DeterministicCheck>,
    pub convergence: Vec<ConvergenceRow>,
    pub identities_verdict: Verdict,
    pub intersection_verdict: Verdict,
    pub refinement_verdict: Verdict,
    pub verdict: Verdict,
}

/// Relative Abel residual accepted as exact.
pub const ABEL_TOLERANCE: f64 = 1e-10;

fn deterministic_checks() -> Result<Vec<DeterministicCheck>> {
    let grid = TimeGrid::default_for(1.0)?;
    let eps = grid.epsilon();
    let power = stieltjes_bracket(&deterministic_path(&grid), &SingularKernel::new(0.5, 1.0)?)?;
    let exp_grid = TimeGrid::uniform(1.0, EXP_GRID_INTERVALS, eps)?;
    let expo = exp_kernel_integral(&deterministic_path(&exp_grid), &ExpKernel::new(1.0, 1.0)?)?;
    let make = |name: &str, b: crate::integrals::IntegralBracket, truncated: f64, full: f64| DeterministicCheck {
        name: name.to_string(),
        lower: b.lower,
        upper: b.upper,
        exact_truncated: truncated,
        exact_full: full,
        verdict: Verdict::from_bool(b.contains(truncated) && (full - b.lower).abs() <= b.gap()),
    };
    Ok(vec![
        make("power_theta_half", power, 2.0 * (1.0 - eps.sqrt()), 2.0),
        make(
            "exponential_lambda_one",
            expo,
            1.0 - (-(1.0 - eps)).exp(),
            1.0 - (-1.0f64).exp(),
        ),
    ])
}

/// Integration-by-parts consistency, summation-by-parts identity, dyadic
/// block domination, deterministic-path integrals and grid refinement.
pub fn run_ibp_consistency(
    params: &StableParams,
    theta: f64,
    horizon: f64,
    n_paths: u64,
    master_seed: u64,
    workers: &Workers,
) -> Result<IbpReport> {
    check_replicates(n_paths, 2)?;
    let alpha = params.alpha();
    if !(theta > 0.0 && theta < 1.0 / alpha) {
        return Err(Error::domain(format!(
            "theta must lie in (0, 1/alpha) = (0, {}), got {theta}",
            1.0 / alpha
        )));
    }
    let kernel = SingularKernel::new(theta, horizon)?;
    let sampler = PathSampler::new(*params, TimeGrid::default_for(horizon)?);
    let theta_seed = derive_seed(master_seed, 1);
    let p = alpha / 2.0;

    let rows = workers.map(n_paths, |i| -> Result<(bool, f64, bool)> {
        let path = sampler.sample(SeedSpec::new(master_seed, i));
        let st = stieltjes_bracket(&path, &kernel)?;
        let ibp = ibp_estimate(&path, &kernel)?;
        let random_theta = SeedSpec::new(theta_seed, i).rng().random_range(0.0..2.0 / alpha);
        let abel = abel_identity_check(&path, &SingularKernel::new(random_theta, horizon)?).relative();
        let blocks = dyadic_block_estimate(&path, &kernel, p)?;
        Ok((st.intersects(&ibp.bracket), abel, blocks >= ibp.time_integral.upper.powf(p)))
    });
    let (mut intersecting, mut max_abel, mut dominating) = (0u64, 0.0f64, 0u64);
    for row in rows {
        let (hit, abel, dom) = row?;
        intersecting += u64::from(hit);
        max_abel = max_abel.max(abel);
        dominating += u64::from(dom);
    }

    let mut convergence = Vec::new();
    for refine in [1usize, 2, 4, 8] {
        let levels = 40 * refine;
        let grid = TimeGrid::geometric(horizon, 0.5f64.powf(1.0 / refine as f64), levels)?;
        let sampler = PathSampler::new(*params, grid);
        let seed = derive_seed(master_seed, 10 + refine as u64);
        let brackets = workers.map(n_paths, |i| stieltjes_bracket(&sampler.sample(SeedSpec::new(seed, i)), &kernel));
        let brackets = brackets.into_iter().collect::<Result<Vec<_>>>()?;
        let lower: Vec<f64> = brackets.iter().map(|b| b.lower).collect();
        let upper: Vec<f64> = brackets.iter().map(|b| b.upper).collect();
        let gap: Vec<f64> = brackets.iter().map(|b| b.gap()).collect();
        convergence.push(ConvergenceRow {
            grid_levels: levels,
            lower_sum: median(&lower),
            upper_sum: median(&upper),
            gap: median(&gap),
        });
    }

    let deterministic = deterministic_checks()?;
    let identities_verdict = Verdict::all(
        deterministic
            .iter()
            .map(|d| d.verdict)
            .chain([Verdict::from_bool(max_abel <= ABEL_TOLERANCE)]),
    );
    let intersection_verdict = Verdict::from_bool(intersecting == n_paths && dominating == n_paths);
    let refinement_verdict = Verdict::from_bool(convergence.windows(2).all(|w| w[1].gap < w[0].gap));
    Ok(IbpReport {
        alpha,
        theta,
        horizon,
        n_paths,
        intersecting,
        max_abel_relative: max_abel,
        dyadic_dominating: dominating,
        deterministic,
        convergence,
        identities_verdict,
        intersection_verdict,
        refinement_verdict,
        verdict: Verdict::all([identities_verdict, intersection_verdict, refinement_verdict]),
    })
}
