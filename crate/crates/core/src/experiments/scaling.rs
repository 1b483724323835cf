use serde::{Deserialize, Serialize};

use super::{check_replicates, Verdict, Workers};
use crate::error::{Error, Result};
use crate::special_math::stable_moment;
use crate::stats::mean_and_std_error;
use crate::subordinator::{derive_seed, PathSampler, SeedSpec, StableParams, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub t: f64,
    /// Monte Carlo `E S_t^p / t^{p/α}`.
    pub normalized_moment: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub alpha: f64,
    pub p: f64,
    pub n_replicates: u64,
    pub points: Vec<ScalingPoint>,
    /// `E S_1^p` from the closed form (quadrature-validated).
    pub oracle: f64,
    /// Largest `|a - b| / sqrt(se_a² + se_b²)` over pairs of times.
    pub max_pairwise_z: f64,
    pub verdict: Verdict,
}

/// Checks that `E S_t^p / t^{p/α}` does not depend on `t`.
///
/// Each time uses its own independent replicates; the verdict passes when
/// every pair of normalised moments agrees within three combined standard
/// errors.
pub fn run_scaling_check(
    params: &StableParams,
    p: f64,
    times: &[f64],
    n_replicates: u64,
    master_seed: u64,
    workers: &Workers,
) -> Result<ScalingReport> {
    check_replicates(n_replicates, 2)?;
    let alpha = params.alpha();
    let oracle = stable_moment(alpha, p)?;
    if times.is_empty() {
        return Err(Error::domain("scaling check needs at least one time"));
    }
    let mut points = Vec::with_capacity(times.len());
    for (j, &t) in times.iter().enumerate() {
        let sampler = PathSampler::new(*params, TimeGrid::dyadic(t, 0)?);
        let seed = derive_seed(master_seed, j as u64);
        let norm = t.powf(p / alpha);
        let samples = workers.map(n_replicates, |i| sampler.sample(SeedSpec::new(seed, i)).terminal().powf(p) / norm);
        let (mean, se) = mean_and_std_error(&samples);
        points.push(ScalingPoint {
            t,
            normalized_moment: mean,
            std_error: se,
        });
    }
    let mut max_z: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let z = (a.normalized_moment - b.normalized_moment).abs() / a.std_error.hypot(b.std_error);
            max_z = max_z.max(z);
        }
    }
    Ok(ScalingReport {
        alpha,
        p,
        n_replicates,
        points,
        oracle,
        max_pairwise_z: max_z,
        verdict: Verdict::from_bool(max_z <= 3.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scaling_check_is_consistent() {
        let params = StableParams::new(0.5).unwrap();
        let r = run_scaling_check(&params, 0.25, &[0.25, 1.0, 4.0], 20_000, 2, &Workers::default()).unwrap();
        assert_eq!(r.points.len(), 3);
        for pt in &r.points {
            assert!((pt.normalized_moment - r.oracle).abs() < 4.0 * pt.std_error);
        }
    }

    #[test]
    fn vanishing_order_normalizes_to_one() {
        let params = StableParams::new(0.7).unwrap();
        let r = run_scaling_check(&params, 1e-6, &[1.0, 10.0], 200, 2, &Workers::default()).unwrap();
        for pt in &r.points {
            assert!((pt.normalized_moment - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn rejects_invalid_order() {
        let params = StableParams::new(0.5).unwrap();
        assert!(run_scaling_check(&params, 0.6, &[1.0], 100, 2, &Workers::default()).is_err());
        assert!(run_scaling_check(&params, 0.2, &[], 100, 2, &Workers::default()).is_err());
    }
}
