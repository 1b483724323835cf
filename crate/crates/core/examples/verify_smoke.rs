// The acceptance grid with reduced replicate counts. The full grid is
// `stablesub verify-all`.

use stablesub::experiments::Workers;
use stablesub::reporting::{verify_all, VerifyPlan};

pub fn run_example() -> stablesub::Result<()> {
    let report = verify_all(1, &VerifyPlan::smoke(), &Workers::default())?;
    for c in &report.criteria {
        println!("{:>2} {:<45} {:?}", c.id, c.name, c.verdict);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> stablesub::Result<()> {
    run_example()
}
