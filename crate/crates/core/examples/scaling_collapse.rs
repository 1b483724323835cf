// `E S_t^p / t^{p/α}` is the same at every horizon.

use stablesub::experiments::{run_scaling_check, Workers};
use stablesub::subordinator::StableParams;

pub fn run_example() -> stablesub::Result<()> {
    let params = StableParams::new(0.5)?;
    let r = run_scaling_check(&params, 0.25, &[0.25, 1.0, 4.0, 16.0], 20_000, 9, &Workers::default())?;
    for pt in &r.points {
        println!("t = {:>5}: {:.4} ± {:.4}", pt.t, pt.normalized_moment, pt.std_error);
    }
    println!("oracle {:.4}, max pairwise z {:.2}, {:?}", r.oracle, r.max_pairwise_z, r.verdict);
    Ok(())
}

#[allow(dead_code)]
fn main() -> stablesub::Result<()> {
    run_example()
}
