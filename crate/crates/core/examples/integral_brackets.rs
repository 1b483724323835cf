// Brackets `∫_ε^1 t^{-θ} dS_t` on one path with three estimators: the
// Stieltjes lower/upper sums, integration by parts and dyadic blocks.

use stablesub::integrals::{
    abel_identity_check, dyadic_block_estimate, ibp_estimate, stieltjes_bracket, SingularKernel,
};
use stablesub::subordinator::{deterministic_path, sample_path, SeedSpec, StableParams, TimeGrid};

pub fn run_example() -> stablesub::Result<()> {
    let grid = TimeGrid::default_for(1.0)?;

    // S_t = t turns the integral into ∫ t^{-1/2} dt = 2.
    let kernel = SingularKernel::new(0.5, 1.0)?;
    let det = stieltjes_bracket(&deterministic_path(&grid), &kernel)?;
    println!("deterministic: [{:.6}, {:.6}] (exact 2)", det.lower, det.upper);

    let params = StableParams::new(0.5)?;
    let kernel = SingularKernel::new(1.0, 1.0)?;
    for replicate in 0..5 {
        let path = sample_path(&params, &grid, SeedSpec::new(11, replicate));
        let st = stieltjes_bracket(&path, &kernel)?;
        let ibp = ibp_estimate(&path, &kernel)?;
        let abel = abel_identity_check(&path, &kernel);
        let blocks = dyadic_block_estimate(&path, &kernel, 0.25)?;
        println!(
            "path {replicate}: stieltjes [{:.4}, {:.4}]  ibp [{:.4}, {:.4}]  overlap {}  abel {:.1e}  blocks^p {:.4} >= {:.4}",
            st.lower,
            st.upper,
            ibp.bracket.lower,
            ibp.bracket.upper,
            st.intersects(&ibp.bracket),
            abel.relative(),
            blocks,
            ibp.time_integral.upper.powf(0.25),
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> stablesub::Result<()> {
    run_example()
}
