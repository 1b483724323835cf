use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Small-time behaviour of `S_t / h(t)` for a power gauge `h(t) = t^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelClass {
    /// `∫_0^1 h(t)^{-α} dt = ∞`, so `limsup_{t↓0} S_t / h(t) = ∞` a.s.
    LimsupInfinite,
    /// `∫_0^1 h(t)^{-α} dt < ∞`, so `S_t / h(t) → 0` a.s.
    RatioVanishes,
}

/// Classifies `h(t) = t^c` by convergence of `∫_0^1 t^{-cα} dt`, which
/// diverges exactly when `cα ≥ 1`. `α = 1` is allowed (the deterministic
/// case).
pub fn classify_power_kernel(alpha: f64, c: f64) -> Result<KernelClass> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1], got {alpha}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain(format!("exponent c must be > 0, got {c}")));
    }
    // A few ulps of slack so that c = 1/α computed in floating point lands on
    // the divergent side.
    if c * alpha >= 1.0 - 4.0 * f64::EPSILON {
        Ok(KernelClass::LimsupInfinite)
    } else {
        Ok(KernelClass::RatioVanishes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_cases() {
        assert_eq!(classify_power_kernel(0.5, 2.0).unwrap(), KernelClass::LimsupInfinite);
        assert_eq!(classify_power_kernel(0.5, 1.9).unwrap(), KernelClass::RatioVanishes);
        assert_eq!(classify_power_kernel(1.0, 1.0).unwrap(), KernelClass::LimsupInfinite);
        assert_eq!(classify_power_kernel(0.3, 1.0 / 0.3).unwrap(), KernelClass::LimsupInfinite);
        assert_eq!(classify_power_kernel(0.7, 1.0 / 0.7).unwrap(), KernelClass::LimsupInfinite);
    }

    #[test]
    fn invalid_inputs() {
        assert!(classify_power_kernel(0.5, 0.0).is_err());
        assert!(classify_power_kernel(0.0, 1.0).is_err());
        assert!(classify_power_kernel(1.5, 1.0).is_err());
    }
}
