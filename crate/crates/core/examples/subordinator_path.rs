// Samples one path on the default geometric grid and writes it as CSV.
//
// Paths are reproducible: the same `(master_seed, replicate)` pair always
// gives the same values, whatever thread computes them.

use std::fs::File;

use stablesub::subordinator::{sample_path, SeedSpec, StableParams, TimeGrid};

pub fn run_example() -> stablesub::Result<()> {
    let params = StableParams::new(0.5)?;
    let grid = TimeGrid::default_for(1.0)?;
    let seed = SeedSpec::new(2024, 0);
    let path = sample_path(&params, &grid, seed);
    assert_eq!(path.values(), sample_path(&params, &grid, seed).values());

    println!("{} grid points, epsilon = {:e}", grid.len(), grid.epsilon());
    for (t, s) in path.times().iter().zip(path.values()).step_by(8) {
        println!("  S({t:.3e}) = {s:.6e}");
    }
    println!("  S(1) = {:.6}", path.terminal());

    let out = std::env::temp_dir().join("stablesub_path.csv");
    let file = File::create(&out).map_err(|e| stablesub::Error::Io {
        path: out.clone(),
        source: e,
    })?;
    path.write_csv(file)?;
    println!("wrote {}", out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> stablesub::Result<()> {
    run_example()
}
