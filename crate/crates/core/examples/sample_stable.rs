// Draws `S_1` for a few `α` and compares the empirical Laplace transform and
// `p`-th moment with their closed forms.
//
// ```bash
// cargo run --release --example sample_stable
// ```

use stablesub::special_math::{frac_moment_closed_form, FracMomentQuery};
use stablesub::stats::mean_and_std_error;
use stablesub::subordinator::{sample_standard_stable, SeedSpec, StableParams};

const DRAWS: u64 = 20_000;

pub fn run_example() -> stablesub::Result<()> {
    println!("{:>6} {:>8} {:>12} {:>12} {:>10}", "alpha", "lambda", "mc", "exact", "z");
    for alpha in [0.3, 0.5, 0.7] {
        let params = StableParams::new(alpha)?;
        let draws: Vec<f64> = (0..DRAWS)
            .map(|i| sample_standard_stable(&params, SeedSpec::new(7, i)))
            .collect();
        for lambda in [0.5, 1.0, 2.0] {
            let values: Vec<f64> = draws.iter().map(|s| (-lambda * s).exp()).collect();
            let (mean, se) = mean_and_std_error(&values);
            let exact = (-f64::powf(lambda, alpha)).exp();
            println!("{alpha:>6} {lambda:>8} {mean:>12.6} {exact:>12.6} {:>10.2}", (mean - exact) / se);
        }

        let p = alpha / 2.0;
        let powered: Vec<f64> = draws.iter().map(|s| s.powf(p)).collect();
        let (mean, se) = mean_and_std_error(&powered);
        let exact = frac_moment_closed_form(&FracMomentQuery::new(alpha, p, 1.0)?);
        println!("  E S_1^{p:.2}: mc {mean:.5} ± {se:.5}, exact {exact:.5}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> stablesub::Result<()> {
    run_example()
}
