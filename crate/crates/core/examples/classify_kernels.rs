// Small-time behaviour of `S_t / t^c`: infinite limsup when `cα >= 1`,
// otherwise the ratio vanishes.

use stablesub::experiments::classify_power_kernel;

pub fn run_example() -> stablesub::Result<()> {
    for alpha in [0.3, 0.5, 1.0] {
        for c in [0.5, 1.0, 2.0, 4.0] {
            println!("alpha {alpha}, h(t) = t^{c}: {:?}", classify_power_kernel(alpha, c)?);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> stablesub::Result<()> {
    run_example()
}
