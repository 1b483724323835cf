use serde::{Deserialize, Serialize};

use super::{check_replicates, Verdict, Workers};
use crate::error::{Error, Result};
use crate::integrals::{exp_kernel_integral, stieltjes_bracket, ExpKernel, Kernel, SingularKernel};
use crate::special_math::stable_moment;
use crate::stats::mean_and_std_error;
use crate::subordinator::{PathSampler, SeedSpec, StableParams, TimeGrid};

/// Intervals of the uniform grid used for the exponential kernel.
pub const EXP_GRID_INTERVALS: usize = 64;

/// Which end of the integral bracket a moment estimate is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorSide {
    Lower,
    Upper,
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub mean: f64,
    /// Sample standard deviation divided by `√n`.
    pub std_error: f64,
    pub n_replicates: u64,
    pub estimator_side: EstimatorSide,
}

impl MomentEstimate {
    pub fn from_samples(samples: &[f64], estimator_side: EstimatorSide) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::domain("a moment estimate needs at least 2 replicates"));
        }
        let (mean, std_error) = mean_and_std_error(samples);
        Ok(Self {
            mean,
            std_error,
            n_replicates: samples.len() as u64,
            estimator_side,
        })
    }

    /// One-sided 3σ upper confidence limit.
    pub fn upper_limit(&self) -> f64 {
        self.mean + 3.0 * self.std_error
    }
}

fn check_order(alpha: f64, p: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if !(p > 0.0 && p < alpha) {
        return Err(Error::domain(format!("p must lie in (0, alpha) = (0, {alpha}), got {p}")));
    }
    Ok(())
}

/// Moment bound for the singular integral:
/// `(2^{p/α + pθ} E S_1^p / (2^{p/α} - 2^{pθ}) + 1) T^{(1/α - θ) p}`.
pub fn bound_theorem3(alpha: f64, theta: f64, p: f64, horizon: f64) -> Result<f64> {
    check_order(alpha, p)?;
    if !(theta > 0.0) {
        return Err(Error::domain(format!("theta must be > 0, got {theta}")));
    }
    if !(theta < 1.0 / alpha) {
        return Err(Error::domain(format!(
            "theta must be < 1/alpha = {}, got {theta}",
            1.0 / alpha
        )));
    }
    if !(horizon > 0.0) {
        return Err(Error::domain(format!("horizon T must be > 0, got {horizon}")));
    }
    let moment = stable_moment(alpha, p)?;
    let ratio = p / alpha;
    let denominator = ratio.exp2() - (p * theta).exp2();
    let prefactor = (ratio + p * theta).exp2() * moment / denominator + 1.0;
    Ok(prefactor * horizon.powf((1.0 / alpha - theta) * p))
}

/// Moment bound for the exponentially weighted integral:
/// `e^{pλ} / (e^{pλ} - 1) · E S_1^p`, uniform in `T`.
pub fn bound_theorem4(alpha: f64, p: f64, lambda: f64) -> Result<f64> {
    check_order(alpha, p)?;
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("lambda must be > 0, got {lambda}")));
    }
    let moment = stable_moment(alpha, p)?;
    // e^{x} / (e^{x} - 1) = 1 / (1 - e^{-x})
    Ok(moment / -(-p * lambda).exp_m1())
}

/// Kernel whose `p`-th moment bound is being checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MomentKernel {
    Singular(SingularKernel),
    Exponential(ExpKernel),
}

impl MomentKernel {
    pub fn horizon(&self) -> f64 {
        match self {
            MomentKernel::Singular(k) => k.horizon(),
            MomentKernel::Exponential(k) => k.horizon(),
        }
    }

    /// Dyadic grid down to `T·2^{-40}` for the singular kernel; a uniform
    /// grid of [`EXP_GRID_INTERVALS`] steps starting at `T·2^{-40}` for the
    /// exponential one.
    pub fn default_grid(&self) -> Result<TimeGrid> {
        let t = self.horizon();
        match self {
            MomentKernel::Singular(_) => TimeGrid::default_for(t),
            MomentKernel::Exponential(_) => TimeGrid::uniform(t, EXP_GRID_INTERVALS, t * 2f64.powi(-40)),
        }
    }

    /// The applicable moment bound.
    pub fn bound(&self, alpha: f64, p: f64) -> Result<f64> {
        match self {
            MomentKernel::Singular(k) => bound_theorem3(alpha, k.theta(), p, k.horizon()),
            MomentKernel::Exponential(k) => bound_theorem4(alpha, p, k.lambda()),
        }
    }
}

/// Monte Carlo check of a moment bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckReport {
    pub alpha: f64,
    pub p: f64,
    pub kernel: MomentKernel,
    /// Mean of `(upper bracket)^p`; the estimate the verdict is based on.
    pub estimate: MomentEstimate,
    /// Mean of `(lower bracket)^p`.
    pub lower_estimate: MomentEstimate,
    pub bound_value: f64,
    /// `bound_value - (estimate.mean + 3·std_error)`.
    pub margin: f64,
    /// Replicates whose bracket had to be evaluated on the log scale.
    pub log_space_paths: u64,
    pub verdict: Verdict,
}

/// Compares the Monte Carlo `p`-th moment of the integral against its bound.
///
/// The upper bracket is used for the verdict, so a pass is conservative with
/// respect to grid resolution.
pub fn run_moment_check(
    params: &StableParams,
    kernel: &MomentKernel,
    p: f64,
    grid: &TimeGrid,
    n_replicates: u64,
    master_seed: u64,
    workers: &Workers,
) -> Result<BoundCheckReport> {
    check_replicates(n_replicates, 2)?;
    let alpha = params.alpha();
    let bound_value = kernel.bound(alpha, p)?;
    if ((grid.horizon() - kernel.horizon()) / kernel.horizon()).abs() > 1e-12 {
        return Err(Error::Grid(format!(
            "grid horizon {} does not match kernel horizon {}",
            grid.horizon(),
            kernel.horizon()
        )));
    }
    let sampler = PathSampler::new(*params, grid.clone());
    let brackets = workers.map(n_replicates, |i| {
        let path = sampler.sample(SeedSpec::new(master_seed, i));
        match kernel {
            MomentKernel::Singular(k) => stieltjes_bracket(&path, k),
            MomentKernel::Exponential(k) => exp_kernel_integral(&path, k),
        }
    });
    let mut lower = Vec::with_capacity(brackets.len());
    let mut upper = Vec::with_capacity(brackets.len());
    let mut log_space_paths = 0;
    for b in brackets {
        let b = b?;
        if !b.upper.is_finite() {
            return Err(Error::domain(format!(
                "integral overflowed the floating range (log-space evaluation: {})",
                b.log_space
            )));
        }
        log_space_paths += u64::from(b.log_space);
        let powered = b.powf(p);
        lower.push(powered.lower);
        upper.push(powered.upper);
    }
    let estimate = MomentEstimate::from_samples(&upper, EstimatorSide::Upper)?;
    let lower_estimate = MomentEstimate::from_samples(&lower, EstimatorSide::Lower)?;
    let margin = bound_value - estimate.upper_limit();
    Ok(BoundCheckReport {
        alpha,
        p,
        kernel: *kernel,
        estimate,
        lower_estimate,
        bound_value,
        margin,
        log_space_paths,
        verdict: Verdict::from_bool(margin >= 0.0),
    })
}
