// Runs an experiment from a TOML document and writes its record and CSV
// series, the same path the `stablesub` binary takes.

use stablesub::experiments::Workers;
use stablesub::reporting::{parse_config, render_config, run, write_record};

const CONFIG: &str = r#"
experiment = "blowup"
alpha = 0.5
theta = 3.0
n_replicates = 1000
master_seed = 42
"#;

pub fn run_example() -> stablesub::Result<()> {
    let config = parse_config(CONFIG)?;
    println!("resolved config:\n{}", render_config(&config)?);

    let record = run(&config, &Workers::default())?;
    let dir = std::env::temp_dir().join("stablesub_blowup");
    for path in write_record(&record, &dir)? {
        println!("wrote {}", path.display());
    }
    println!("verdict {:?} in {:.2}s", record.verdict, record.wall_clock_seconds);

    match parse_config("experiment = \"moment_bound_theta\"\nalpha = 0.5\ntheta = 2.5\np = 0.25\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("theta above 1/alpha is invalid"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> stablesub::Result<()> {
    run_example()
}
