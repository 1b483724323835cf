// How `∫_ε^1 t^{-θ} dS_t` behaves as `ε → 0` on either side of `θ = 1/α`.
//
// Above the threshold the median of `ε^{-θ} S_ε` grows like
// `ε^{-(θ - 1/α)}`; below it the truncated integral settles.

use stablesub::experiments::{default_blowup_levels, run_blowup_diagnostic, Workers};
use stablesub::subordinator::StableParams;

pub fn run_example() -> stablesub::Result<()> {
    let params = StableParams::new(0.5)?;
    let workers = Workers::default();
    let levels = default_blowup_levels(1.0);
    for theta in [1.0, 2.0, 3.0] {
        let r = run_blowup_diagnostic(&params, theta, 1.0, &levels, 1_000, 5, &workers)?;
        println!(
            "theta {theta}: {:?}, slope {:.3} (expected {:.3}), lower-sum median {:.4} -> {:.4}, {:?}",
            r.regime,
            r.fitted_slope,
            r.expected_slope,
            r.lower_sum_medians[0],
            r.lower_sum_medians[r.lower_sum_medians.len() - 1],
            r.verdict
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> stablesub::Result<()> {
    run_example()
}
