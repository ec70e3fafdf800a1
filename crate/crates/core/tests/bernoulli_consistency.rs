use hetero_sis::exact_solution::{
    convergence_indicator, quadrature_solution_series, solve_z_linear, CoefficientTrack, Verdict, ZSolverOptions,
};
use hetero_sis::reduced_ode::integrate_refined;
use hetero_sis::{integrate, DistributionSpec, OutputGrid, ScenarioConfig};

fn corpus() -> Vec<(&'static str, ScenarioConfig)> {
    let d = |c| DistributionSpec::Degenerate { c };
    vec![
        ("homogeneous", ScenarioConfig::new(1000.0, 1.0, 1.0, d(0.002), d(1.0), 40.0)),
        ("subthreshold", ScenarioConfig::new(1000.0, 10.0, 1.0, d(0.0005), d(1.0), 50.0)),
        (
            "pareto-susceptibility",
            ScenarioConfig::new(10.0, 0.1, 1.0, DistributionSpec::Pareto { xi: 0.5, alpha: 2.0 }, d(1.0), 200.0),
        ),
        (
            "pareto-thin-tail",
            ScenarioConfig::new(10.0, 0.1, 1.0, DistributionSpec::Pareto { xi: 0.5, alpha: 3.0 }, d(1.0), 100.0),
        ),
        (
            "gamma-susceptibility",
            ScenarioConfig::new(100.0, 1.0, 1.0, DistributionSpec::Gamma { shape: 2.0, scale: 0.01 }, d(1.0), 100.0),
        ),
        (
            "gamma-infectivity",
            ScenarioConfig::new(100.0, 1.0, 1.0, d(0.02), DistributionSpec::Gamma { shape: 2.0, scale: 0.01 }, 30.0),
        ),
    ]
}

fn with_steps(cfg: ScenarioConfig) -> ScenarioConfig {
    cfg.with_output(OutputGrid {
        points: 201,
        geometric: 30,
        times: vec![],
        include_steps: true,
    })
}

#[test]
fn both_solution_forms_reproduce_the_reduced_trajectory() {
    let z_options = ZSolverOptions::default();
    for (name, cfg) in corpus() {
        let traj = integrate_refined(&cfg, 4).unwrap();
        let track = CoefficientTrack::from_trajectory(&traj, &cfg).unwrap();
        let z = solve_z_linear(&track, cfg.i0, &traj.times, z_options).unwrap();
        let q = quadrature_solution_series(&track, cfg.i0, &traj.times).unwrap();
        let bound = 10.0 * (cfg.rel_tol + z_options.rel_tol);
        let mut worst_z = 0.0f64;
        let mut worst_q = 0.0f64;
        let mut worst_zq = 0.0f64;
        for k in 0..traj.len() {
            let i = traj.i[k];
            let scale = i.abs() + cfg.abs_tol / cfg.rel_tol;
            worst_z = worst_z.max((z[k] - i).abs() / scale);
            worst_q = worst_q.max((q[k] - i).abs() / scale);
            worst_zq = worst_zq.max((z[k] - q[k]).abs() / q[k].abs());
        }
        println!("{name}: z {worst_z:.3e}  quadrature {worst_q:.3e}  z-vs-quadrature {worst_zq:.3e}");
        assert!(worst_z <= bound, "{name}: z-form error {worst_z:e} > {bound:e}");
        assert!(worst_q <= bound, "{name}: quadrature error {worst_q:e} > {bound:e}");
        assert!(worst_zq <= 1e-6, "{name}: forms disagree by {worst_zq:e}");
    }
}

#[test]
fn endemic_pareto_scenario_shows_divergence() {
    let d = DistributionSpec::Degenerate { c: 1.0 };
    let cfg = with_steps(ScenarioConfig::new(
        10.0,
        0.1,
        1.0,
        DistributionSpec::Pareto { xi: 0.5, alpha: 2.0 },
        d,
        1000.0,
    ));
    let traj = integrate(&cfg).unwrap();
    let track = CoefficientTrack::from_trajectory(&traj, &cfg).unwrap();
    let diag = convergence_indicator(&track).unwrap();
    assert_eq!(diag.verdict, Verdict::Diverging, "{diag:?}");
}

#[test]
fn subthreshold_scenario_is_inconclusive() {
    let d = |c| DistributionSpec::Degenerate { c };
    let cfg = with_steps(ScenarioConfig::new(1000.0, 10.0, 1.0, d(0.0005), d(1.0), 50.0));
    let traj = integrate(&cfg).unwrap();
    let track = CoefficientTrack::from_trajectory(&traj, &cfg).unwrap();
    assert_eq!(convergence_indicator(&track).unwrap().verdict, Verdict::Inconclusive);
}
