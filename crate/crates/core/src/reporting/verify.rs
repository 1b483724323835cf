use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ExperimentKind};
use super::record::{to_json, Outcome, ResultRecord, LIBRARY_VERSION};
use super::runner::run;
use crate::error::Result;
use crate::experiments::{run_frac_moment_chain, Verdict, Workers};
use crate::subordinator::derive_seed;

/// Replicate counts of the acceptance grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyPlan {
    pub laplace: u64,
    pub cdf: u64,
    pub frac_moment: u64,
    pub scaling: u64,
    pub bound_theta: u64,
    pub bound_exp: u64,
    pub blowup: u64,
    pub ibp_paths: u64,
}

impl VerifyPlan {
    /// The full acceptance grid.
    pub fn full() -> Self {
        Self {
            laplace: 100_000,
            cdf: 100_000,
            frac_moment: 1_000_000,
            scaling: 100_000,
            bound_theta: 100_000,
            bound_exp: 100_000,
            blowup: 10_000,
            ibp_paths: 1_000,
        }
    }

    /// Same grid with far fewer replicates, for smoke runs.
    pub fn smoke() -> Self {
        Self {
            laplace: 2_000,
            cdf: 2_000,
            frac_moment: 2_000,
            scaling: 2_000,
            bound_theta: 500,
            bound_exp: 200,
            blowup: 200,
            ibp_paths: 50,
        }
    }
}

/// One numbered acceptance check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub verdict: Verdict,
    pub records: Vec<ResultRecord>,
    /// Outcomes not produced through an experiment config.
    pub extra: Vec<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub library_version: String,
    pub master_seed: u64,
    pub plan: VerifyPlan,
    pub criteria: Vec<CriterionResult>,
    pub verdict: Verdict,
}

impl VerifyReport {
    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn criterion(&self, id: u32) -> Option<&CriterionResult> {
        self.criteria.iter().find(|c| c.id == id)
    }
}

const ALPHAS: [f64; 3] = [0.3, 0.5, 0.7];

struct Builder<'a> {
    master_seed: u64,
    workers: &'a Workers,
}

impl Builder<'_> {
    fn config(&self, kind: ExperimentKind, criterion: u32, cell: u64, n: u64) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(kind);
        c.n_replicates = n;
        c.master_seed = derive_seed(self.master_seed, u64::from(criterion) * 1000 + cell);
        c
    }

    fn criterion(&self, id: u32, name: &str, configs: Vec<ExperimentConfig>) -> Result<CriterionResult> {
        let records = configs
            .iter()
            .map(|c| run(c, self.workers))
            .collect::<Result<Vec<_>>>()?;
        Ok(CriterionResult {
            id,
            name: name.to_string(),
            verdict: Verdict::all(records.iter().map(|r| r.verdict)),
            records,
            extra: Vec::new(),
        })
    }
}

/// Runs acceptance criteria 1 to 10 with the given replicate counts.
///
/// The report depends only on `master_seed` and `plan`: every cell derives
/// its own seed and replicates are reduced in index order, so the JSON is
/// byte-identical for any worker count.
pub fn verify_all(master_seed: u64, plan: &VerifyPlan, workers: &Workers) -> Result<VerifyReport> {
    let b = Builder { master_seed, workers };
    let mut criteria = Vec::with_capacity(10);

    let c = b.config(ExperimentKind::LaplaceCheck, 1, 0, plan.laplace);
    criteria.push(b.criterion(1, "laplace transform fidelity", vec![c])?);

    let c = b.config(ExperimentKind::CdfCheck, 2, 0, plan.cdf);
    criteria.push(b.criterion(2, "alpha = 1/2 distribution", vec![c])?);

    let frac = run_frac_moment_chain(
        &[0.3, 0.5, 0.7, 0.9],
        &[0.25, 1.0, 4.0],
        0.5,
        0.25,
        plan.frac_moment,
        derive_seed(master_seed, 3000),
        workers,
    )?;
    criteria.push(CriterionResult {
        id: 3,
        name: "fractional moment oracle chain".into(),
        verdict: frac.verdict,
        records: Vec::new(),
        extra: vec![Outcome::FracMoment(frac)],
    });

    let mut c = b.config(ExperimentKind::Scaling, 4, 0, plan.scaling);
    c.alpha = Some(0.5);
    c.p = Some(0.25);
    criteria.push(b.criterion(4, "scaling collapse", vec![c])?);

    let mut configs = Vec::new();
    for alpha in ALPHAS {
        for theta_frac in [0.5, 0.8] {
            for p_frac in [0.25, 0.5] {
                let mut c = b.config(ExperimentKind::MomentBoundTheta, 5, configs.len() as u64, plan.bound_theta);
                c.alpha = Some(alpha);
                c.theta = Some(theta_frac / alpha);
                c.p = Some(p_frac * alpha);
                configs.push(c);
            }
        }
    }
    criteria.push(b.criterion(5, "singular kernel moment bound", configs)?);

    let mut configs = Vec::new();
    for alpha in ALPHAS {
        for p_frac in [0.25, 0.5] {
            for lambda in [0.5, 1.0, 2.0] {
                for horizon in [1.0, 5.0] {
                    let mut c = b.config(ExperimentKind::MomentBoundExp, 6, configs.len() as u64, plan.bound_exp);
                    c.alpha = Some(alpha);
                    c.p = Some(p_frac * alpha);
                    c.lambda = Some(lambda);
                    c.horizon = horizon;
                    configs.push(c);
                }
            }
        }
    }
    criteria.push(b.criterion(6, "exponential kernel moment bound", configs)?);

    let mut configs = Vec::new();
    for alpha in ALPHAS {
        for excess in [0.5, 1.0, 2.0] {
            let mut c = b.config(ExperimentKind::Blowup, 7, configs.len() as u64, plan.blowup);
            c.alpha = Some(alpha);
            c.theta = Some(1.0 / alpha + excess);
            configs.push(c);
        }
    }
    criteria.push(b.criterion(7, "blow-up slope law", configs)?);

    let mut configs = Vec::new();
    for alpha in ALPHAS {
        // The median of the truncated sum settles at rate ε^{1 - αθ}, so
        // θα near 1 would need far smaller ε than 2^{-40}.
        for theta_frac in [0.25, 0.5] {
            let mut c = b.config(ExperimentKind::Blowup, 8, configs.len() as u64, plan.blowup);
            c.alpha = Some(alpha);
            c.theta = Some(theta_frac / alpha);
            c.epsilon_levels = Some((4..=8).map(|k| 2f64.powi(-5 * k)).collect());
            configs.push(c);
        }
    }
    criteria.push(b.criterion(8, "finiteness stabilization", configs)?);

    let mut c = b.config(ExperimentKind::IbpConsistency, 9, 0, plan.ibp_paths);
    c.alpha = Some(0.5);
    c.theta = Some(1.0);
    let ibp = b.criterion(9, "exact identities", vec![c])?;
    let (identities, intersection) = match &ibp.records[0].outcome {
        Outcome::Ibp(r) => (r.identities_verdict, r.intersection_verdict),
        _ => (Verdict::Fail, Verdict::Fail),
    };
    let mut consistency = ibp.clone();
    consistency.id = 10;
    consistency.name = "integration by parts vs Stieltjes brackets".into();
    consistency.verdict = intersection;
    criteria.push(CriterionResult {
        verdict: identities,
        ..ibp
    });
    criteria.push(consistency);

    let verdict = Verdict::all(criteria.iter().map(|c| c.verdict));
    Ok(VerifyReport {
        library_version: LIBRARY_VERSION.to_string(),
        master_seed,
        plan: *plan,
        criteria,
        verdict,
    })
}

/// Outcome of re-running `verify-all` and comparing JSON bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproducibilityCheck {
    pub repeat_identical: bool,
    pub single_worker_identical: bool,
    pub verdict: Verdict,
}

/// Runs [`verify_all`] again with `workers` and once with a single worker,
/// comparing both against `first`.
pub fn check_reproducibility(first: &VerifyReport, workers: &Workers) -> Result<ReproducibilityCheck> {
    let reference = first.to_json()?;
    let again = verify_all(first.master_seed, &first.plan, workers)?.to_json()?;
    let single = verify_all(first.master_seed, &first.plan, &Workers::fixed(1)?)?.to_json()?;
    let repeat_identical = again == reference;
    let single_worker_identical = single == reference;
    Ok(ReproducibilityCheck {
        repeat_identical,
        single_worker_identical,
        verdict: Verdict::from_bool(repeat_identical && single_worker_identical),
    })
}
