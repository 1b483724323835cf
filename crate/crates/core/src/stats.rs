//! Small statistical helpers shared by the experiment drivers.

/// Sample mean and standard error `sd / √n` (with the `n - 1` variance).
pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Median of already sorted data.
pub fn median_sorted(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

pub fn median(xs: &[f64]) -> f64 {
    median_sorted(&sorted(xs))
}

/// Distribution-free 95% confidence interval for the median of sorted data,
/// from the normal approximation to the binomial order-statistic ranks.
pub fn median_ci_sorted(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let half_width = 1.959_963_984_540_054 * n.sqrt() / 2.0;
    let lo = ((n / 2.0 - half_width).floor().max(0.0)) as usize;
    let hi = ((n / 2.0 + half_width).ceil() as usize).min(xs.len() - 1);
    (xs[lo], xs[hi])
}

/// Ordinary least squares fit `y ≈ intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the residuals.
    pub residual_rms: f64,
}

pub fn ols(x: &[f64], y: &[f64]) -> LinearFit {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - intercept - slope * a;
            r * r
        })
        .sum();
    LinearFit {
        slope,
        intercept,
        residual_rms: (rss / n).sqrt(),
    }
}

/// One-sample Kolmogorov–Smirnov distance `sup |F_n - F|` for sorted data.
pub fn ks_statistic_sorted<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> f64 {
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov distance for sorted samples.
pub fn ks_two_sample_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Asymptotic Kolmogorov quantile at the 1% level.
pub const KS_COEFF_1PCT: f64 = 1.627_61;
/// Asymptotic Kolmogorov quantile at the 5% level.
pub const KS_COEFF_5PCT: f64 = 1.358_10;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_se_known_values() {
        let (m, se) = mean_and_std_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // sd = sqrt(5/3)
        assert!((se - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn median_odd_even() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn ols_recovers_exact_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 0.5 * v).collect();
        let fit = ols(&x, &y);
        assert!((fit.slope + 0.5).abs() < 1e-14);
        assert!((fit.intercept - 3.0).abs() < 1e-14);
        assert!(fit.residual_rms < 1e-14);
    }

    #[test]
    fn ks_of_uniform_grid() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let d = ks_statistic_sorted(&xs, |x| x);
        assert!((d - 0.005).abs() < 1e-12);
    }

    #[test]
    fn two_sample_ks_identical_and_disjoint() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_two_sample_sorted(&a, &a), 0.0);
        assert_eq!(ks_two_sample_sorted(&a, &[4.0, 5.0]), 1.0);
    }

    #[test]
    fn median_ci_brackets_median() {
        let xs: Vec<f64> = (0..1001).map(f64::from).collect();
        let (lo, hi) = median_ci_sorted(&xs);
        assert!(lo < 500.0 && hi > 500.0);
        assert!(hi - lo < 80.0);
    }
}
