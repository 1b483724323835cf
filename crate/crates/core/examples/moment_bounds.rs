// Monte Carlo `p`-th moments of the singular and exponentially weighted
// integrals against their bounds.

use stablesub::experiments::{bound_theorem3, bound_theorem4, run_moment_check, MomentKernel, Workers};
use stablesub::integrals::{ExpKernel, SingularKernel};
use stablesub::subordinator::StableParams;

pub fn run_example() -> stablesub::Result<()> {
    println!("singular bound (0.5, 1, 0.25, T=1) = {:.4}", bound_theorem3(0.5, 1.0, 0.25, 1.0)?);
    println!("exponential bound (0.5, 0.25, 1)   = {:.4}", bound_theorem4(0.5, 0.25, 1.0)?);

    let params = StableParams::new(0.5)?;
    let workers = Workers::default();
    let kernels = [
        MomentKernel::Singular(SingularKernel::new(1.0, 1.0)?),
        MomentKernel::Singular(SingularKernel::new(1.6, 1.0)?),
        MomentKernel::Exponential(ExpKernel::new(1.0, 5.0)?),
    ];
    for kernel in kernels {
        let grid = kernel.default_grid()?;
        let r = run_moment_check(&params, &kernel, 0.25, &grid, 5_000, 3, &workers)?;
        println!(
            "{:?}: E[I^p] in [{:.4}, {:.4}] ± {:.4}, bound {:.4}, {:?}",
            kernel, r.lower_estimate.mean, r.estimate.mean, r.estimate.std_error, r.bound_value, r.verdict
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> stablesub::Result<()> {
    run_example()
}
