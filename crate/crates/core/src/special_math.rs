//! Special functions and closed-form reference values for the stable law.
//!
//! Everything here is a pure function of its arguments. The fractional moment
//! has two independent routes: [`frac_moment_closed_form`] and
//! [`frac_moment_quadrature`], the latter integrating the Laplace transform
//! directly so that it can serve as an oracle for the former.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive real arguments.
///
/// Uses the Lanczos series for `x >= 0.5` and the reflection formula below.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    Ok(gamma_positive(x))
}

fn gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) Γ(1 - x) = π / sin(πx)
        return PI / ((PI * x).sin() * lanczos(1.0 - x));
    }
    lanczos(x)
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let base = z + LANCZOS_G + 0.5;
    // Split the power so that it does not overflow before the exponential
    // factor is applied.
    let half_pow = base.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half_pow * (half_pow * (-base).exp()) * series
}

/// Normalising constant `α / Γ(1 - α)` of the subordinator's Lévy measure.
pub fn levy_constant(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(alpha / gamma_positive(1.0 - alpha))
}

/// Arguments of a fractional moment `E S_t^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracMomentQuery {
    alpha: f64,
    p: f64,
    t: f64,
}

impl FracMomentQuery {
    pub fn new(alpha: f64, p: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
        }
        if !(p > 0.0) {
            return Err(Error::domain(format!("p must be > 0, got {p}")));
        }
        if !(p < alpha) {
            return Err(Error::domain(format!(
                "p must be < alpha (got p = {p}, alpha = {alpha}); moments of order >= alpha are infinite"
            )));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::domain(format!("t must be > 0, got {t}")));
        }
        Ok(Self { alpha, p, t })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// `E S_t^p = t^{p/α} Γ(1 - p/α) / Γ(1 - p)`.
pub fn frac_moment_closed_form(q: &FracMomentQuery) -> f64 {
    let ratio = q.p / q.alpha;
    q.t.powf(ratio) * gamma_positive(1.0 - ratio) / gamma_positive(1.0 - q.p)
}

const MOMENT_REL_TOL: f64 = 1e-10;
const MOMENT_MAX_INTERVALS: usize = 4000;

/// `E S_t^p` by integrating `(p/Γ(1-p)) ∫ λ^{-p-1} (1 - e^{-λ^α t}) dλ` over `(0, ∞)`.
///
/// The range is split at `λ₀ = t^{-1/α}`. Below it the substitution
/// `λ = λ₀ u^{1/(α-p)}` and above it `λ = λ₀ v^{-1/p}` turn both pieces into
/// bounded integrands on `(0, 1]`, so the adaptive rule never sees a
/// singularity.
pub fn frac_moment_quadrature(q: &FracMomentQuery) -> Result<f64> {
    let (alpha, p, t) = (q.alpha, q.p, q.t);
    let gap = alpha - p;
    let inner_exp = alpha / gap;
    // (1 - e^{-w}) / w with w = u^{α/(α-p)}
    let lower_piece = |u: f64| {
        let w = u.powf(inner_exp);
        if w < 1e-300 {
            1.0
        } else {
            -(-w).exp_m1() / w
        }
    };
    let outer_exp = -alpha / p;
    let upper_piece = |v: f64| -(-v.powf(outer_exp)).exp_m1();

    let lower = quadrature::integrate(lower_piece, 0.0, 1.0, 0.0, MOMENT_REL_TOL, MOMENT_MAX_INTERVALS)?;
    let upper = quadrature::integrate(upper_piece, 0.0, 1.0, 0.0, MOMENT_REL_TOL, MOMENT_MAX_INTERVALS)?;
    let integral = lower.value / gap + upper.value / p;
    Ok(p / gamma_positive(1.0 - p) * t.powf(p / alpha) * integral)
}

/// `E S_1^p`, validated against the quadrature route before being returned.
pub fn stable_moment(alpha: f64, p: f64) -> Result<f64> {
    let q = FracMomentQuery::new(alpha, p, 1.0)?;
    let closed = frac_moment_closed_form(&q);
    let quad = frac_moment_quadrature(&q)?;
    if ((closed - quad) / quad).abs() > 1e-6 {
        return Err(Error::domain(format!(
            "closed-form moment {closed} disagrees with quadrature {quad} at alpha = {alpha}, p = {p}"
        )));
    }
    Ok(closed)
}

/// CDF of `S_1` when `α = 1/2` (the Lévy distribution): `erfc(1 / (2√x))`.
pub fn levy_half_cdf(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("levy_half_cdf requires x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(libm::erfc(0.5 / x.sqrt()))
}
