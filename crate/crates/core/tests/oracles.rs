use hetero_sis::oracles::binned::integrate_binned_at;
use hetero_sis::oracles::compare::compare_trajectories;
use hetero_sis::oracles::stochastic::simulate_stochastic_at;
use hetero_sis::oracles::{compare, fit_power_law, integrate_binned, quantile_bins, simulate_stochastic, Bin};
use hetero_sis::{integrate_at, DistributionSpec, OutputGrid, ScenarioConfig};

fn d(c: f64) -> DistributionSpec {
    DistributionSpec::Degenerate { c }
}

fn uniform(t_end: f64, points: usize) -> Vec<f64> {
    (0..points).map(|k| t_end * k as f64 / (points - 1) as f64).collect()
}

fn geometric(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| (lo.ln() + (hi / lo).ln() * k as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Equilibrium of the cohort model with constant infectivity β₂:
/// S = Σ N wⱼ / (1 + β₁ⱼβ₂I/γ), I = N − S, solved by bisection on I.
fn cohort_equilibrium(bins: &[Bin], beta2: f64, gamma: f64, n: f64) -> f64 {
    let s_of = |i: f64| -> f64 { bins.iter().map(|b| n * b.weight / (1.0 + b.value * beta2 * i / gamma)).sum() };
    let (mut lo, mut hi) = (1e-12 * n, n);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid + s_of(mid) > n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    n - 0.5 * (lo + hi)
}

#[test]
fn single_cohort_matches_reduced_system() {
    let cfg = ScenarioConfig::new(1000.0, 1.0, 1.0, d(0.002), d(1.0), 40.0);
    let times = uniform(40.0, 201);
    let traj = integrate_at(&cfg, &times).unwrap();
    let oracle = integrate_binned_at(&cfg, 1, 1, &times).unwrap();
    let report = compare(&traj, &oracle).unwrap();
    assert!(report.sup_rel() <= 1e-6, "{}", report.sup_rel());
}

#[test]
fn pareto_cohorts_settle_at_the_cohort_equilibrium() {
    let cfg = ScenarioConfig::new(10.0, 0.1, 1.0, DistributionSpec::Pareto { xi: 0.5, alpha: 2.0 }, d(1.0), 1000.0);
    let oracle = integrate_binned_at(&cfg, 400, 1, &[0.0, 1000.0]).unwrap();
    let bins = quantile_bins(&cfg.susceptibility, 400).unwrap();
    let expected = cohort_equilibrium(&bins, 1.0, 1.0, 10.0);
    let s_t = oracle.mean.final_s();
    println!("binned S(T) = {s_t}, cohort equilibrium = {expected}");
    assert!((s_t - expected).abs() < 1e-6 * expected);
}

#[test]
fn bin_refinement_barely_moves_the_endpoint() {
    let cfg = ScenarioConfig::new(10.0, 0.1, 1.0, DistributionSpec::Pareto { xi: 0.5, alpha: 2.0 }, d(1.0), 1000.0);
    let coarse = integrate_binned_at(&cfg, 200, 1, &[0.0, 1000.0]).unwrap().mean.final_s();
    let fine = integrate_binned_at(&cfg, 400, 1, &[0.0, 1000.0]).unwrap().mean.final_s();
    println!("K=200: {coarse}, K=400: {fine}");
    assert!((coarse - fine).abs() <= 0.005 * fine);
}

#[test]
fn short_horizon_discrepancy_is_at_least_quadratic() {
    let times: Vec<f64> = std::iter::once(0.0).chain(geometric(1e-3, 1e-1, 25)).collect();
    let scenarios = [
        (
            "gamma susceptibility",
            ScenarioConfig::new(100.0, 10.0, 1.0, DistributionSpec::Gamma { shape: 2.0, scale: 0.005 }, d(1.0), 0.1),
            400,
            1,
        ),
        (
            "pareto susceptibility, alpha = 3",
            ScenarioConfig::new(100.0, 10.0, 1.0, DistributionSpec::Pareto { xi: 0.01, alpha: 3.0 }, d(1.0), 0.1),
            400,
            1,
        ),
        (
            "gamma infectivity",
            ScenarioConfig::new(100.0, 10.0, 1.0, d(0.01), DistributionSpec::Gamma { shape: 2.0, scale: 0.5 }, 0.1),
            1,
            400,
        ),
    ];
    for (name, cfg, k1, k2) in scenarios {
        let cfg = cfg.with_tolerances(1e-12, 1e-14);
        let traj = integrate_at(&cfg, &times).unwrap();
        let oracle = integrate_binned_at(&cfg, k1, k2, &times).unwrap();
        let report = compare(&traj, &oracle).unwrap();
        let (t, e): (Vec<f64>, Vec<f64>) = report.points.iter().skip(1).map(|p| (p.t, p.abs_i)).unzip();
        let fit = fit_power_law(&t, &e).unwrap();
        println!("{name}: exponent {:.4}, coefficient {:.4e}", fit.exponent, fit.coefficient);
        assert!(fit.exponent >= 1.9, "{name}: {fit:?}");
    }
}

#[test]
fn stochastic_homogeneous_mean_reaches_logistic_equilibrium() {
    let n = 1e4;
    let cfg = ScenarioConfig::new(n, 100.0, 1.0, d(2.0 / n), d(1.0), 20.0);
    let res = simulate_stochastic_at(&cfg, 10_000, 100, 7, &[0.0, 10.0, 20.0]).unwrap();
    let i_end = res.mean.final_i();
    println!("mean I(20) = {i_end}");
    assert!((i_end - n / 2.0).abs() <= 0.03 * n / 2.0);
}

#[test]
fn stochastic_subthreshold_replicas_all_go_extinct() {
    let n = 1000.0;
    let cfg = ScenarioConfig::new(n, 50.0, 1.0, d(0.5 / n), d(1.0), 100.0);
    let res = simulate_stochastic_at(&cfg, 1000, 200, 3, &[0.0, 100.0]).unwrap();
    assert_eq!(res.replicas.len(), 200);
    assert!(res.replicas.iter().all(|r| r.final_i() == 0.0));
}

fn pareto_agent_scenario(n: f64) -> ScenarioConfig {
    ScenarioConfig::new(
        n,
        0.05 * n,
        1.0,
        DistributionSpec::Pareto { xi: 1e-4 * 1e4 / n, alpha: 2.0 },
        d(1.0),
        10.0,
    )
}

#[test]
fn stochastic_mean_tracks_binned_cohorts() {
    let cfg = pareto_agent_scenario(1e4);
    let times = uniform(10.0, 51);
    let binned = integrate_binned_at(&cfg, 400, 1, &times).unwrap();
    let stochastic = simulate_stochastic_at(&cfg, 10_000, 100, 2024, &times).unwrap();
    let report = compare_trajectories(&stochastic.mean, &binned.mean).unwrap();
    println!("normalized sup error {:.4}, relative sup on I {:.4}", report.sup_normalized, report.sup_rel_i);
    assert!(report.sup_normalized <= 0.05);
}

#[test]
fn stochastic_error_shrinks_with_agent_count() {
    let cfg = ScenarioConfig::new(
        1.0,
        0.05,
        1.0,
        DistributionSpec::Pareto { xi: 1.0, alpha: 3.0 },
        d(1.0),
        5.0,
    );
    let times = [0.0, 5.0];
    let binned = integrate_binned_at(&cfg, 400, 1, &times).unwrap().mean.final_i();
    let errors: Vec<f64> = [1_000, 4_000, 16_000]
        .iter()
        .map(|&agents| {
            let i = simulate_stochastic_at(&cfg, agents, 100, 77, &times).unwrap().mean.final_i();
            (i - binned).abs() / binned
        })
        .collect();
    println!("relative errors at T = 5: {errors:?}");
    assert!(errors[2] <= errors[0] / 2.0, "{errors:?}");
}

#[test]
fn default_grid_oracles_share_the_reduced_grid() {
    let cfg = ScenarioConfig::new(10.0, 0.1, 1.0, DistributionSpec::Pareto { xi: 0.5, alpha: 2.0 }, d(1.0), 10.0)
        .with_output(OutputGrid::uniform(11));
    let binned = integrate_binned(&cfg, 20, 1).unwrap();
    let stochastic = simulate_stochastic(&cfg, 100, 2, 1).unwrap();
    assert_eq!(binned.mean.times, stochastic.mean.times);
    assert_eq!(binned.mean.len(), 11);
}
