// Acceptance grid. The full suite runs once (8 workers) and is shared by the
// per-criterion tests; criterion 11 runs it twice more.

use std::sync::OnceLock;

use stablesub::experiments::{Verdict, Workers};
use stablesub::reporting::{verify_all, Outcome, ResultRecord, VerifyPlan, VerifyReport, DEFAULT_SEED};

const SEED: u64 = DEFAULT_SEED;
const WORKERS: usize = 8;

fn report() -> &'static VerifyReport {
    static REPORT: OnceLock<VerifyReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let workers = Workers::fixed(WORKERS).expect("worker pool");
        verify_all(SEED, &VerifyPlan::full(), &workers).expect("verify-all runs")
    })
}

fn report_line(id: u32, name: &str, ok: bool, detail: String) {
    println!(
        "criterion {id:>2} [{}] {name}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn records(id: u32) -> &'static [ResultRecord] {
    &report().criterion(id).expect("criterion present").records
}

#[test]
fn criterion_01_laplace_transform() {
    let Outcome::Laplace(r) = &records(1)[0].outcome else { panic!("laplace outcome") };
    assert_eq!(r.n_replicates, 100_000);
    assert_eq!(r.cells.len(), 9);
    let within = r
        .cells
        .iter()
        .filter(|c| (c.mean - (-c.lambda.powf(c.alpha)).exp()).abs() <= 3.0 * c.std_error)
        .count();
    report_line(1, "Laplace transform fidelity", within >= 8, format!("{within}/9 cells within 3 SE"));
}

#[test]
fn criterion_02_levy_cdf() {
    let Outcome::Cdf(r) = &records(2)[0].outcome else { panic!("cdf outcome") };
    let critical = 1.628 / (r.n_replicates as f64).sqrt();
    report_line(
        2,
        "alpha = 1/2 distribution oracle",
        r.n_replicates == 100_000 && r.statistic < critical,
        format!("KS {:.5} vs critical {:.5}", r.statistic, critical),
    );
}

#[test]
fn criterion_03_fractional_moment_chain() {
    let c = report().criterion(3).unwrap();
    let Outcome::FracMoment(r) = &c.extra[0] else { panic!("fractional moment outcome") };
    let max_rel = r
        .cells
        .iter()
        .map(|c| ((c.quadrature - c.closed_form) / c.closed_form).abs())
        .fold(0.0, f64::max);
    let mc = &r.monte_carlo;
    let ok = r.cells.len() == 36
        && max_rel <= 1e-6
        && mc.n_replicates == 1_000_000
        && (mc.oracle - 1.446_409_084_632_077).abs() < 1e-8
        && (mc.mean - mc.oracle).abs() <= 3.0 * mc.std_error;
    report_line(
        3,
        "fractional moment oracle chain",
        ok,
        format!(
            "max rel {max_rel:.1e} over {} cells; MC {:.5} ± {:.5} vs {:.5}",
            r.cells.len(),
            mc.mean,
            mc.std_error,
            mc.oracle
        ),
    );
}

#[test]
fn criterion_04_scaling_collapse() {
    let Outcome::Scaling(r) = &records(4)[0].outcome else { panic!("scaling outcome") };
    let times: Vec<f64> = r.points.iter().map(|p| p.t).collect();
    let mut worst: f64 = 0.0;
    for (i, a) in r.points.iter().enumerate() {
        for b in &r.points[i + 1..] {
            let z = (a.normalized_moment - b.normalized_moment).abs() / a.std_error.hypot(b.std_error);
            worst = worst.max(z);
        }
    }
    report_line(
        4,
        "scaling collapse",
        times == [0.25, 1.0, 4.0] && worst <= 3.0,
        format!("max pairwise z {worst:.2}"),
    );
}

#[test]
fn criterion_05_singular_moment_bound() {
    let mut ok = true;
    let mut reference_cell = None;
    for rec in records(5) {
        let Outcome::MomentBound(r) = &rec.outcome else { panic!("moment outcome") };
        ok &= r.estimate.n_replicates == 100_000 && r.estimate.mean + 3.0 * r.estimate.std_error <= r.bound_value;
        if rec.config.alpha == Some(0.5) && rec.config.theta == Some(1.0) && rec.config.p == Some(0.25) {
            reference_cell = Some(r.bound_value);
        }
    }
    let bound = reference_cell.expect("cell (0.5, 1, 0.25) present");
    ok &= (bound - 11.811_069_891_303_61).abs() < 1e-9;
    report_line(
        5,
        "singular kernel moment bound",
        ok,
        format!("{} cells, reference bound {bound:.4}", records(5).len()),
    );
}

#[test]
fn criterion_06_exponential_moment_bound() {
    let mut ok = true;
    let mut reference_cell = None;
    let mut horizons = Vec::new();
    for rec in records(6) {
        let Outcome::MomentBound(r) = &rec.outcome else { panic!("moment outcome") };
        ok &= r.estimate.mean + 3.0 * r.estimate.std_error <= r.bound_value;
        horizons.push(rec.config.horizon);
        if rec.config.alpha == Some(0.5) && rec.config.p == Some(0.25) && rec.config.lambda == Some(1.0) {
            reference_cell = Some(r.bound_value);
        }
    }
    let bound = reference_cell.expect("cell (0.5, 0.25, 1) present");
    ok &= (bound - 6.538_943_060_991_891).abs() < 1e-9;
    ok &= horizons.contains(&1.0) && horizons.contains(&5.0);
    report_line(
        6,
        "exponential kernel moment bound",
        ok,
        format!("{} cells, reference bound {bound:.4}", records(6).len()),
    );
}

#[test]
fn criterion_07_blowup_slope() {
    let mut ok = true;
    let mut details = Vec::new();
    for rec in records(7) {
        let Outcome::Blowup(r) = &rec.outcome else { panic!("blowup outcome") };
        // Slope against ln ε is the negative of the slope against ln(1/ε).
        let slope_vs_ln_eps = -r.fitted_slope;
        let target = -(r.theta - 1.0 / r.alpha);
        let good = (slope_vs_ln_eps - target).abs() <= 0.1
            && r.n_replicates == 10_000
            && r.epsilons.len() == 21
            && r.epsilons[0] == 2f64.powi(-10)
            && r.epsilons[20] == 2f64.powi(-30);
        ok &= good;
        details.push(format!("{:.3}/{:.3}", slope_vs_ln_eps, target));
    }
    report_line(7, "blow-up slope law", ok && details.len() == 9, details.join(" "));
}

#[test]
fn criterion_08_finiteness_stabilization() {
    let mut ok = true;
    let mut details = Vec::new();
    for rec in records(8) {
        let Outcome::Blowup(r) = &rec.outcome else { panic!("blowup outcome") };
        assert!(r.theta < 1.0 / r.alpha);
        let n = r.epsilons.len();
        assert_eq!(r.epsilons[n - 2], 2f64.powi(-35));
        assert_eq!(r.epsilons[n - 1], 2f64.powi(-40));
        let change = (r.lower_sum_medians[n - 1] - r.lower_sum_medians[n - 2]).abs() / r.lower_sum_medians[n - 2];
        ok &= change < 0.01;
        details.push(format!("{change:.1e}"));
    }
    report_line(8, "finiteness stabilization", ok, format!("relative changes {}", details.join(" ")));
}

#[test]
fn criterion_09_exact_identities() {
    let Outcome::Ibp(r) = &records(9)[0].outcome else { panic!("ibp outcome") };
    let deterministic_ok = r.deterministic.iter().all(|d| {
        let gap = d.upper - d.lower;
        d.lower <= d.exact_truncated && d.exact_truncated <= d.upper && (d.exact_full - d.lower).abs() <= gap
    });
    let full: Vec<f64> = r.deterministic.iter().map(|d| d.exact_full).collect();
    let ok = r.n_paths == 1_000
        && r.max_abel_relative <= 1e-10
        && deterministic_ok
        && (full[0] - 2.0).abs() < 1e-15
        && (full[1] - (1.0 - (-1.0f64).exp())).abs() < 1e-15;
    report_line(
        9,
        "exact identities",
        ok,
        format!("max Abel residual {:.1e}, deterministic integrals {deterministic_ok}", r.max_abel_relative),
    );
}

#[test]
fn criterion_10_ibp_stieltjes_consistency() {
    let Outcome::Ibp(r) = &records(10)[0].outcome else { panic!("ibp outcome") };
    report_line(
        10,
        "IBP and Stieltjes brackets intersect",
        r.n_paths == 1_000 && r.intersecting == r.n_paths,
        format!("{}/{} paths", r.intersecting, r.n_paths),
    );
}

#[test]
fn criterion_11_reproducibility() {
    let reference = report().to_json().unwrap();
    let again = verify_all(SEED, &VerifyPlan::full(), &Workers::fixed(WORKERS).unwrap())
        .unwrap()
        .to_json()
        .unwrap();
    let single = verify_all(SEED, &VerifyPlan::full(), &Workers::fixed(1).unwrap())
        .unwrap()
        .to_json()
        .unwrap();
    report_line(
        11,
        "byte-identical records",
        again == reference && single == reference,
        format!(
            "repeat identical {}, 1 vs {WORKERS} workers identical {} ({} bytes)",
            again == reference,
            single == reference,
            reference.len()
        ),
    );
}

#[test]
fn overall_verdict_passes() {
    assert_eq!(report().verdict, Verdict::Pass);
}
