use proptest::prelude::*;

use stablesub::experiments::{classify_power_kernel, run_moment_check, KernelClass, MomentKernel, Workers};
use stablesub::integrals::{abel_identity_check, ibp_estimate, stieltjes_bracket, ExpKernel, SingularKernel};
use stablesub::quadrature::integrate;
use stablesub::reporting::{parse_config, render_config, ExperimentConfig, ExperimentKind, GridConfig, GridKindConfig};
use stablesub::special_math::{
    frac_moment_closed_form, frac_moment_quadrature, gamma_fn, levy_half_cdf, FracMomentQuery,
};
use stablesub::stats::{ks_two_sample_sorted, sorted, KS_COEFF_5PCT};
use stablesub::subordinator::{
    sample_path, sample_standard_stable, PathSampler, SeedSpec, StableParams, TimeGrid,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_recurrence(x in 0.01f64..20.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!(((lhs - rhs) / rhs).abs() <= 1e-12, "x = {x}: {lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn terminal_value_scales_exactly(alpha in 0.05f64..0.95, t in 0.01f64..100.0, seed in any::<u64>()) {
        let params = StableParams::new(alpha).unwrap();
        let spec = SeedSpec::new(seed, 0);
        let at_t = PathSampler::new(params, TimeGrid::dyadic(t, 0).unwrap()).sample(spec).terminal();
        let at_one = PathSampler::new(params, TimeGrid::dyadic(1.0, 0).unwrap()).sample(spec).terminal();
        let scaled = t.powf(1.0 / alpha) * at_one;
        prop_assert!(((at_t - scaled) / scaled).abs() <= 1e-12);
    }

    #[test]
    fn brackets_are_ordered_and_agree(
        alpha in 0.1f64..0.95,
        theta_frac in 0.0f64..2.0,
        horizon in 0.1f64..10.0,
        seed in any::<u64>(),
    ) {
        let params = StableParams::new(alpha).unwrap();
        let grid = TimeGrid::geometric(horizon, 0.5, 30).unwrap();
        let path = sample_path(&params, &grid, SeedSpec::new(seed, 1));
        let kernel = SingularKernel::new(theta_frac / alpha, horizon).unwrap();
        let st = stieltjes_bracket(&path, &kernel).unwrap();
        prop_assert!(st.lower >= 0.0 && st.lower <= st.upper);
        let ibp = ibp_estimate(&path, &kernel).unwrap();
        prop_assert!(st.intersects(&ibp.bracket));
        prop_assert!(abel_identity_check(&path, &kernel).relative() <= 1e-10);
    }

    #[test]
    fn exp_bracket_is_ordered(lambda in 0.01f64..10.0, horizon in 0.1f64..10.0, seed in any::<u64>()) {
        let params = StableParams::new(0.5).unwrap();
        let grid = TimeGrid::uniform(horizon, 64, horizon * 1e-9).unwrap();
        let path = sample_path(&params, &grid, SeedSpec::new(seed, 0));
        let b = stablesub::integrals::exp_kernel_integral(&path, &ExpKernel::new(lambda, horizon).unwrap()).unwrap();
        prop_assert!(b.lower <= b.upper);
        prop_assert!(b.upper <= path.terminal() - path.initial() + 1e-12 * path.terminal());
    }

    #[test]
    fn config_round_trip(config in valid_config()) {
        let text = render_config(&config).unwrap();
        prop_assert_eq!(parse_config(&text).unwrap(), config);
    }
}

fn valid_config() -> impl Strategy<Value = ExperimentConfig> {
    let kinds = prop_oneof![
        Just(ExperimentKind::LaplaceCheck),
        Just(ExperimentKind::CdfCheck),
        Just(ExperimentKind::Scaling),
        Just(ExperimentKind::MomentBoundTheta),
        Just(ExperimentKind::MomentBoundExp),
        Just(ExperimentKind::Blowup),
        Just(ExperimentKind::IbpConsistency),
        Just(ExperimentKind::KernelClassify),
    ];
    (
        kinds,
        0.05f64..0.95,
        0.01f64..0.99,
        0.01f64..0.99,
        0.01f64..10.0,
        0.1f64..10.0,
        (100u64..1_000_000, any::<u64>(), any::<bool>(), 1usize..60),
    )
        .prop_map(|(kind, alpha, theta_frac, p_frac, lambda, horizon, (n, seed, uniform, levels))| {
            let mut c = ExperimentConfig::new(kind);
            c.n_replicates = n;
            c.master_seed = seed;
            c.horizon = horizon;
            c.lambda = Some(lambda);
            if kind != ExperimentKind::CdfCheck {
                c.alpha = Some(alpha);
            }
            c.theta = Some(theta_frac / alpha);
            c.p = Some(p_frac * alpha);
            if kind == ExperimentKind::Scaling {
                c.times = Some(vec![0.5 * horizon, horizon, 2.0 * horizon]);
            }
            if kind == ExperimentKind::Blowup {
                c.epsilon_levels = Some(vec![horizon / 4.0, horizon / 64.0]);
            }
            c.grid = if uniform {
                GridConfig { kind: GridKindConfig::Uniform, ratio: 0.5, levels, epsilon: Some(horizon * 1e-6) }
            } else {
                GridConfig { kind: GridKindConfig::Geometric, ratio: 0.25 + 0.5 * theta_frac, levels, epsilon: None }
            };
            c.output_path = uniform.then(|| format!("out/{seed}"));
            c
        })
}

#[test]
fn closed_form_matches_quadrature_on_grid() {
    let mut cells = 0;
    for alpha in [0.3, 0.5, 0.7, 0.9] {
        for frac in [0.25, 0.5, 0.75] {
            for t in [0.25, 1.0, 4.0] {
                let q = FracMomentQuery::new(alpha, frac * alpha, t).unwrap();
                let closed = frac_moment_closed_form(&q);
                let quad = frac_moment_quadrature(&q).unwrap();
                assert!(((closed - quad) / quad).abs() <= 1e-6, "{q:?}: {closed} vs {quad}");
                cells += 1;
            }
        }
    }
    assert_eq!(cells, 36);
}

#[test]
fn levy_cdf_is_monotone_on_log_grid() {
    let mut previous = 0.0;
    for k in -400..=400 {
        let x = 10f64.powf(k as f64 / 20.0);
        let f = levy_half_cdf(x).unwrap();
        assert!((0.0..=1.0).contains(&f));
        assert!(f >= previous, "cdf decreased at x = {x}");
        previous = f;
    }
}

#[test]
fn increments_match_scaled_marginal() {
    // S_1 - S_{1/2} on a path must have the law of 2^{-1/α} S_1.
    let alpha = 0.6;
    let params = StableParams::new(alpha).unwrap();
    let sampler = PathSampler::new(params, TimeGrid::dyadic(1.0, 6).unwrap());
    let n = 20_000u64;
    let increments: Vec<f64> = (0..n)
        .map(|i| {
            let path = sampler.sample(SeedSpec::new(31, i));
            let v = path.values();
            v[v.len() - 1] - v[v.len() - 2]
        })
        .collect();
    let scale = 0.5f64.powf(1.0 / alpha);
    let direct: Vec<f64> = (0..n)
        .map(|i| scale * sample_standard_stable(&params, SeedSpec::new(32, i)))
        .collect();
    let d = ks_two_sample_sorted(&sorted(&increments), &sorted(&direct));
    let critical = KS_COEFF_5PCT * (2.0 / n as f64).sqrt();
    assert!(d < critical, "KS distance {d} >= {critical}");
}

// ∫_0^U e^{-u(1-e)} du equals ∫_{e^{-U}}^1 t^{-e} dt; it stays bounded
// as U grows exactly when e < 1.
fn truncated_power_integral(e: f64, upper: f64) -> f64 {
    integrate(|u| (-u * (1.0 - e)).exp(), 0.0, upper, 0.0, 1e-10, 2000).unwrap().value
}

#[test]
fn classification_matches_numeric_integral() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 50 {
        let alpha: f64 = rng.random_range(0.05..1.0);
        let c: f64 = rng.random_range(0.05..1.5 / alpha);
        let e = c * alpha;
        if (e - 1.0).abs() <= 0.05 {
            continue;
        }
        let value = truncated_power_integral(e, 690.0);
        let numeric = if value > 1e6 { KernelClass::LimsupInfinite } else { KernelClass::RatioVanishes };
        assert_eq!(classify_power_kernel(alpha, c).unwrap(), numeric, "alpha {alpha}, c {c}");
        checked += 1;
    }
}

#[test]
fn moment_check_is_independent_of_worker_count() {
    let params = StableParams::new(0.5).unwrap();
    let kernel = MomentKernel::Singular(SingularKernel::new(1.0, 1.0).unwrap());
    let grid = kernel.default_grid().unwrap();
    let one = run_moment_check(&params, &kernel, 0.25, &grid, 3000, 9, &Workers::fixed(1).unwrap()).unwrap();
    let four = run_moment_check(&params, &kernel, 0.25, &grid, 3000, 9, &Workers::fixed(4).unwrap()).unwrap();
    assert_eq!(
        serde_json::to_string(&one).unwrap(),
        serde_json::to_string(&four).unwrap()
    );
}
