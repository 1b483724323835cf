//! Pathwise Stieltjes integrals against a subordinator path, with rigorous
//! lower/upper enclosures.
//!
//! Paths are only known at grid points, so every estimator returns an
//! [`IntegralBracket`]. For a monotone integrand and a nondecreasing
//! integrator, the endpoint sums enclose the true integral over `[ε, T]`.
//! The singular kernel `t^{-θ}` is decreasing (its left endpoint value gives
//! the upper sum); the exponential kernel `e^{-λ(T-t)}` is increasing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subordinator::SubordinatorPath;

/// Above this value of `θ·|ln ε|` the kernel is handled on the log scale.
pub const LOG_SPACE_THRESHOLD: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// A positive monotone integrand on `(0, T]`.
pub trait Kernel {
    fn ln_value(&self, t: f64) -> f64;
    fn value(&self, t: f64) -> f64;
    fn monotonicity(&self) -> Monotonicity;
    fn horizon(&self) -> f64;
    /// Whether values at `epsilon` can leave the floating range.
    fn needs_log_space(&self, _epsilon: f64) -> bool {
        false
    }
}

/// `t ↦ t^{-θ}` on `(0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularKernel {
    theta: f64,
    horizon: f64,
}

impl SingularKernel {
    /// `θ = 0` is accepted as the degenerate constant kernel.
    pub fn new(theta: f64, horizon: f64) -> Result<Self> {
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::domain(format!("theta must be >= 0, got {theta}")));
        }
        check_horizon(horizon)?;
        Ok(Self { theta, horizon })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl Kernel for SingularKernel {
    fn ln_value(&self, t: f64) -> f64 {
        -self.theta * t.ln()
    }

    fn value(&self, t: f64) -> f64 {
        t.powf(-self.theta)
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::Decreasing
    }

    fn horizon(&self) -> f64 {
        self.horizon
    }

    fn needs_log_space(&self, epsilon: f64) -> bool {
        self.theta * epsilon.ln().abs() > LOG_SPACE_THRESHOLD
    }
}

/// `t ↦ e^{-λ(T-t)}` on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpKernel {
    lambda: f64,
    horizon: f64,
}

impl ExpKernel {
    pub fn new(lambda: f64, horizon: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain(format!("lambda must be > 0, got {lambda}")));
        }
        check_horizon(horizon)?;
        Ok(Self { lambda, horizon })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Kernel for ExpKernel {
    fn ln_value(&self, t: f64) -> f64 {
        -self.lambda * (self.horizon - t)
    }

    fn value(&self, t: f64) -> f64 {
        self.ln_value(t).exp()
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::Increasing
    }

    fn horizon(&self) -> f64 {
        self.horizon
    }
}

fn check_horizon(horizon: f64) -> Result<()> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::domain(format!("horizon T must be > 0, got {horizon}")));
    }
    Ok(())
}

fn check_matching_horizon(path: &SubordinatorPath, kernel: &impl Kernel) -> Result<()> {
    let (a, b) = (path.horizon(), kernel.horizon());
    if ((a - b) / b).abs() > 1e-12 {
        return Err(Error::Grid(format!("kernel horizon {b} does not match path horizon {a}")));
    }
    Ok(())
}

/// Enclosure `[lower, upper]` of a pathwise integral over `[ε, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralBracket {
    pub lower: f64,
    pub upper: f64,
    /// Set when terms were formed on the log scale to avoid overflow.
    pub log_space: bool,
}

impl IntegralBracket {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn intersects(&self, other: &IntegralBracket) -> bool {
        self.lower.max(other.lower) <= self.upper.min(other.upper)
    }

    /// Bracket of the `p`-th power; valid because `x ↦ x^p` is increasing.
    pub fn powf(&self, p: f64) -> IntegralBracket {
        IntegralBracket {
            lower: self.lower.max(0.0).powf(p),
            upper: self.upper.max(0.0).powf(p),
            log_space: self.log_space,
        }
    }
}

/// `k · x` for `x ≥ 0`, formed as `exp(ln k + ln x)` in log space.
#[inline]
fn weighted(ln_k: f64, k: f64, x: f64, log_space: bool) -> f64 {
    if !log_space {
        k * x
    } else if x > 0.0 {
        (ln_k + x.ln()).exp()
    } else {
        0.0
    }
}

/// Endpoint sums of `∫ k dS` over consecutive grid cells.
///
/// `direction` states how `k` varies in `t`; the endpoint that maximises `k`
/// on each cell contributes to the upper sum.
pub fn monotone_bracket<K: Kernel>(path: &SubordinatorPath, kernel: &K, direction: Monotonicity) -> IntegralBracket {
    let t = path.times();
    let s = path.values();
    let log_space = kernel.needs_log_space(t[0]);
    let ln_k: Vec<f64> = t.iter().map(|&x| kernel.ln_value(x)).collect();
    let k: Vec<f64> = if log_space {
        Vec::new()
    } else {
        t.iter().map(|&x| kernel.value(x)).collect()
    };
    let kv = |i: usize| if log_space { 0.0 } else { k[i] };

    let (mut lower, mut upper) = (0.0, 0.0);
    for i in 0..t.len() - 1 {
        let ds = s[i + 1] - s[i];
        let left = weighted(ln_k[i], kv(i), ds, log_space);
        let right = weighted(ln_k[i + 1], kv(i + 1), ds, log_space);
        match direction {
            Monotonicity::Decreasing => {
                lower += right;
                upper += left;
            }
            Monotonicity::Increasing => {
                lower += left;
                upper += right;
            }
        }
    }
    IntegralBracket { lower, upper, log_space }
}

/// Brackets `∫_ε^T t^{-θ} dS_t` by right (lower) and left (upper) endpoint sums.
pub fn stieltjes_bracket(path: &SubordinatorPath, kernel: &SingularKernel) -> Result<IntegralBracket> {
    check_matching_horizon(path, kernel)?;
    Ok(monotone_bracket(path, kernel, kernel.monotonicity()))
}

/// Brackets `∫_ε^T e^{-λ(T-t)} dS_t` by left (lower) and right (upper) endpoint sums.
pub fn exp_kernel_integral(path: &SubordinatorPath, kernel: &ExpKernel) -> Result<IntegralBracket> {
    check_matching_horizon(path, kernel)?;
    Ok(monotone_bracket(path, kernel, kernel.monotonicity()))
}

/// Integration-by-parts form of the singular integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IbpEstimate {
    /// Bracket of `T^{-θ} S_T - ε^{-θ} S_ε + θ ∫_ε^T t^{-θ-1} S_t dt`.
    pub bracket: IntegralBracket,
    /// Bracket of the time integral `∫_ε^T t^{-θ-1} S_t dt` alone.
    pub time_integral: IntegralBracket,
}

/// Logarithm of the cell weight: `θ ∫_a^b t^{-θ-1} dt = a^{-θ} (1 - (a/b)^θ)`
/// when `θ > 0`, and `∫_a^b t^{-1} dt = ln(b/a)` when `θ = 0`.
fn ln_cell_weight(theta: f64, a: f64, b: f64) -> f64 {
    let ln_ratio = (b / a).ln();
    if theta == 0.0 {
        return ln_ratio.ln();
    }
    -theta * a.ln() + (-(-theta * ln_ratio).exp_m1()).ln()
}

/// Integration-by-parts estimate of `∫_ε^T t^{-θ} dS_t`.
///
/// The time integral is bracketed with `S` frozen at the left (lower) or
/// right (upper) end of each cell, and each cell weight
/// `∫ t^{-θ-1} dt` is integrated exactly.
///
/// The bracket is evaluated for the shifted path `S_t - S_ε`, which has the
/// same increments. This removes the boundary term at `ε`, which would
/// otherwise cancel against the time integral to all digits once `ε^{-θ}`
/// is large.
pub fn ibp_estimate(path: &SubordinatorPath, kernel: &SingularKernel) -> Result<IbpEstimate> {
    check_matching_horizon(path, kernel)?;
    let theta = kernel.theta();
    let t = path.times();
    let s = path.values();
    let n = t.len();
    let log_space = kernel.needs_log_space(t[0]);

    let boundary = weighted(kernel.ln_value(t[n - 1]), kernel.value(t[n - 1]), s[n - 1] - s[0], log_space);

    // For θ > 0 the weights carry the factor θ; for θ = 0 they are ln(b/a).
    let (mut q_lower, mut q_upper) = (0.0, 0.0);
    let (mut shifted_lower, mut shifted_upper) = (0.0, 0.0);
    for i in 0..n - 1 {
        let ln_w = ln_cell_weight(theta, t[i], t[i + 1]);
        let w = ln_w.exp();
        q_lower += weighted(ln_w, w, s[i], log_space);
        q_upper += weighted(ln_w, w, s[i + 1], log_space);
        shifted_lower += weighted(ln_w, w, s[i] - s[0], log_space);
        shifted_upper += weighted(ln_w, w, s[i + 1] - s[0], log_space);
    }
    let (bracket, time_integral) = if theta == 0.0 {
        (
            IntegralBracket {
                lower: boundary,
                upper: boundary,
                log_space,
            },
            IntegralBracket {
                lower: q_lower,
                upper: q_upper,
                log_space,
            },
        )
    } else {
        (
            IntegralBracket {
                lower: boundary + shifted_lower,
                upper: boundary + shifted_upper,
                log_space,
            },
            IntegralBracket {
                lower: q_lower / theta,
                upper: q_upper / theta,
                log_space,
            },
        )
    };
    Ok(IbpEstimate { bracket, time_integral })
}

/// Absolute and scale of the discrete summation-by-parts residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbelDiscrepancy {
    pub absolute: f64,
    /// Sum of magnitudes of all terms entering the identity.
    pub scale: f64,
}

impl AbelDiscrepancy {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.absolute
        } else {
            self.absolute / self.scale
        }
    }
}

/// Residual of `Σ f_i ΔS_i + Σ S_{i+1} Δf_i = f(T) S_T - f(ε) S_ε` with `f(t) = t^{-θ}`.
pub fn abel_identity_check(path: &SubordinatorPath, kernel: &SingularKernel) -> AbelDiscrepancy {
    let t = path.times();
    let s = path.values();
    let n = t.len();
    let log_space = kernel.needs_log_space(t[0]);
    let theta = kernel.theta();
    let f = |i: usize| (kernel.ln_value(t[i]), kernel.value(t[i]));

    let (mut left_sum, mut right_sum, mut scale) = (0.0, 0.0, 0.0);
    for i in 0..n - 1 {
        let (ln_fi, fi) = f(i);
        let a = weighted(ln_fi, fi, s[i + 1] - s[i], log_space);
        // S_{i+1} (f_{i+1} - f_i) = S_{i+1} f_i ((t_{i+1}/t_i)^{-θ} - 1)
        let b = weighted(ln_fi, fi, s[i + 1], log_space) * (-theta * (t[i + 1] / t[i]).ln()).exp_m1();
        left_sum += a;
        right_sum += b;
        scale += a.abs() + b.abs();
    }
    let (ln_fn, fn_) = f(n - 1);
    let (ln_f0, f0) = f(0);
    let end = weighted(ln_fn, fn_, s[n - 1], log_space);
    let start = weighted(ln_f0, f0, s[0], log_space);
    scale += end.abs() + start.abs();
    AbelDiscrepancy {
        absolute: ((left_sum + right_sum) - (end - start)).abs(),
        scale,
    }
}

/// Per-path dyadic block sum `Σ_k [(T/2^{k+1})^{-θ} S_{T/2^k}]^p`.
///
/// Each term dominates the `p`-th power of `∫ t^{-θ-1} S_t dt` over the block
/// `[T/2^{k+1}, T/2^k]`, so the sum dominates `(time integral)^p` for `p < 1`.
pub fn dyadic_block_estimate(path: &SubordinatorPath, kernel: &SingularKernel, p: f64) -> Result<f64> {
    check_matching_horizon(path, kernel)?;
    if !path.grid().is_dyadic() {
        return Err(Error::Grid("dyadic block estimate requires a geometric grid with ratio 1/2".into()));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("moment order p must lie in (0,1), got {p}")));
    }
    let t = path.times();
    let s = path.values();
    let total = t
        .windows(2)
        .zip(s.windows(2))
        .map(|(tw, sw)| {
            if sw[1] > 0.0 {
                (p * (kernel.ln_value(tw[0]) + sw[1].ln())).exp()
            } else {
                0.0
            }
        })
        .sum();
    Ok(total)
}
