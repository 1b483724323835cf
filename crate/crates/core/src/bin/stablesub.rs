use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stablesub::experiments::{Verdict, Workers};
use stablesub::reporting::{
    check_reproducibility, config_with_overrides, run, verify_all, write_record, ExperimentKind, VerifyPlan,
};
use stablesub::Result;

#[derive(Parser)]
#[command(name = "stablesub", version, about = "Stable subordinator integral experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Empirical Laplace transform of S_1 against exp(-λ^α).
    Laplace(ExperimentArgs),
    /// KS distance of α = 1/2 draws from the Lévy CDF.
    Cdf(ExperimentArgs),
    /// E S_t^p / t^{p/α} across horizons.
    Scaling(ExperimentArgs),
    /// Moment bound for ∫ t^{-θ} dS_t.
    BoundTheta(ExperimentArgs),
    /// Moment bound for ∫ e^{-λ(T-t)} dS_t.
    BoundExp(ExperimentArgs),
    /// Divergence slope of ε^{-θ} S_ε and the truncated integral.
    Blowup(ExperimentArgs),
    /// Integration by parts against the Stieltjes bracket.
    Ibp(ExperimentArgs),
    /// Classify h(t) = t^c (pass c as --theta).
    Classify(ExperimentArgs),
    /// Run the whole acceptance grid.
    VerifyAll(VerifyArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML experiment document; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, short = 'T')]
    horizon: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    epsilon_levels: Option<Vec<f64>>,
    /// geometric or uniform
    #[arg(long)]
    grid_kind: Option<String>,
    #[arg(long)]
    grid_ratio: Option<f64>,
    #[arg(long)]
    grid_levels: Option<u64>,
    #[arg(long)]
    grid_epsilon: Option<f64>,
    #[arg(long)]
    replicates: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default `results/<experiment>`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = stablesub::reporting::DEFAULT_SEED)]
    seed: u64,
    /// Output directory for verify_all.json.
    #[arg(long, default_value = "results/verify-all")]
    out: PathBuf,
    #[arg(long)]
    workers: Option<usize>,
    /// Fewer replicates on the same grid.
    #[arg(long)]
    smoke: bool,
    /// Skip the re-runs that check byte-identical output.
    #[arg(long)]
    skip_reproducibility: bool,
}

fn float(v: f64) -> toml::Value {
    toml::Value::Float(v)
}

fn int(v: u64) -> toml::Value {
    toml::Value::Integer(v as i64)
}

fn floats(v: &[f64]) -> toml::Value {
    toml::Value::Array(v.iter().copied().map(float).collect())
}

fn run_experiment(kind: ExperimentKind, a: ExperimentArgs) -> Result<Verdict> {
    let base = match &a.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| stablesub::Error::Io {
            path: path.clone(),
            source: e,
        })?),
        None => None,
    };
    let mut overrides: Vec<(&str, toml::Value)> = Vec::new();
    let mut set = |key, value: Option<toml::Value>| {
        if let Some(v) = value {
            overrides.push((key, v));
        }
    };
    set("alpha", a.alpha.map(float));
    set("theta", a.theta.map(float));
    set("p", a.p.map(float));
    set("lambda", a.lambda.map(float));
    set("horizon", a.horizon.map(float));
    set("times", a.times.as_deref().map(floats));
    set("epsilon_levels", a.epsilon_levels.as_deref().map(floats));
    set("grid.kind", a.grid_kind.clone().map(toml::Value::String));
    set("grid.ratio", a.grid_ratio.map(float));
    set("grid.levels", a.grid_levels.map(int));
    set("grid.epsilon", a.grid_epsilon.map(float));
    set("n_replicates", a.replicates.map(int));
    set("master_seed", a.seed.map(int));
    set(
        "output_path",
        a.out.as_ref().map(|p| toml::Value::String(p.display().to_string())),
    );
    let config = config_with_overrides(base.as_deref(), kind, &overrides)?;
    let workers = Workers::from_option(a.workers)?;
    let record = run(&config, &workers)?;
    let dir = config
        .output_path
        .clone()
        .map_or_else(|| PathBuf::from("results").join(kind.name()), PathBuf::from);
    for path in write_record(&record, &dir)? {
        println!("wrote {}", path.display());
    }
    println!("{}: {:?} ({:.2}s)", kind.name(), record.verdict, record.wall_clock_seconds);
    Ok(record.verdict)
}

fn run_verify_all(a: VerifyArgs) -> Result<Verdict> {
    let workers = Workers::from_option(a.workers)?;
    let plan = if a.smoke { VerifyPlan::smoke() } else { VerifyPlan::full() };
    let start = std::time::Instant::now();
    let report = verify_all(a.seed, &plan, &workers)?;
    std::fs::create_dir_all(&a.out).map_err(|e| stablesub::Error::Io {
        path: a.out.clone(),
        source: e,
    })?;
    let path = a.out.join("verify_all.json");
    std::fs::write(&path, report.to_json()?).map_err(|e| stablesub::Error::Io {
        path: path.clone(),
        source: e,
    })?;
    for c in &report.criteria {
        println!("criterion {:>2} {:<45} {:?}", c.id, c.name, c.verdict);
    }
    let mut verdict = report.verdict;
    if !a.skip_reproducibility {
        let repro = check_reproducibility(&report, &workers)?;
        println!("criterion 11 {:<45} {:?}", "reproducibility", repro.verdict);
        verdict = Verdict::all([verdict, repro.verdict]);
    }
    println!("wrote {}", path.display());
    println!("verify-all: {verdict:?} ({:.1}s)", start.elapsed().as_secs_f64());
    Ok(verdict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Laplace(a) => run_experiment(ExperimentKind::LaplaceCheck, a),
        Command::Cdf(a) => run_experiment(ExperimentKind::CdfCheck, a),
        Command::Scaling(a) => run_experiment(ExperimentKind::Scaling, a),
        Command::BoundTheta(a) => run_experiment(ExperimentKind::MomentBoundTheta, a),
        Command::BoundExp(a) => run_experiment(ExperimentKind::MomentBoundExp, a),
        Command::Blowup(a) => run_experiment(ExperimentKind::Blowup, a),
        Command::Ibp(a) => run_experiment(ExperimentKind::IbpConsistency, a),
        Command::Classify(a) => run_experiment(ExperimentKind::KernelClassify, a),
        Command::VerifyAll(a) => run_verify_all(a),
    };
    match result {
        Ok(v) if v.is_fail() => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
