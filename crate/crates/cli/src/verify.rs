//! Checks behind `hetero-sis verify`.

use std::collections::BTreeMap;

use clap::ValueEnum;
use hetero_sis::exact_solution::{
    convergence_indicator, quadrature_solution_series, solve_z_linear, CoefficientTrack, ZSolverOptions,
};
use hetero_sis::final_size::{predict_for, verify_against_ode, Regime, DEFAULT_HORIZON_MULT};
use hetero_sis::oracles::binned::integrate_binned_at;
use hetero_sis::oracles::compare::compare_trajectories;
use hetero_sis::oracles::stochastic::simulate_stochastic_at;
use hetero_sis::oracles::{fit_power_law, CompareReport, PowerLawFit};
use hetero_sis::reduced_ode::integrate_refined;
use hetero_sis::{integrate_at, OutputGrid, ScenarioConfig, Trajectory};
use serde::Serialize;

use crate::config::ConfigFile;

pub const IDENTITY_TOL: f64 = 1e-6;
pub const FINAL_SIZE_TOL: f64 = 0.01;
pub const MIN_EXPONENT: f64 = 1.9;
pub const STOCHASTIC_TOL: f64 = 0.05;
pub const FORMS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Bernoulli,
    FinalSize,
    OracleBinned,
    OracleStochastic,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Informational; never gates the exit status.
    Reported,
    Skipped,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub gating: bool,
    pub metrics: BTreeMap<&'static str, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Check {
    fn new(name: &'static str, gating: bool) -> Self {
        Self {
            name,
            status: Status::Pass,
            gating,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    fn metric(&mut self, key: &'static str, value: f64) -> &mut Self {
        self.metrics.insert(key, value);
        self
    }

    fn require(&mut self, ok: bool, failure: String) {
        if !ok {
            self.status = Status::Fail;
            self.notes.push(failure);
        }
    }

    fn failed(name: &'static str, gating: bool, e: impl std::fmt::Display) -> Self {
        let mut c = Check::new(name, gating);
        c.status = Status::Error;
        c.notes.push(e.to_string());
        c
    }

    pub fn blocks(&self) -> bool {
        self.gating && matches!(self.status, Status::Fail | Status::Error)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OracleSizes {
    pub k1: usize,
    pub k2: usize,
    pub agents: usize,
    pub replicas: usize,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub which: Which,
    pub scenario: ConfigFile,
    pub oracle: OracleSizes,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub fn run(which: Which, file: &ConfigFile, cfg: &ScenarioConfig, sizes: OracleSizes) -> VerifyReport {
    let wanted = |w: Which| which == w || which == Which::All;
    let mut checks = Vec::new();
    if wanted(Which::Bernoulli) {
        checks.push(bernoulli(cfg));
    }
    if wanted(Which::FinalSize) {
        checks.push(final_size(cfg));
    }
    if wanted(Which::OracleBinned) {
        checks.extend(oracle_binned(cfg, sizes.k1, sizes.k2));
    }
    if wanted(Which::OracleStochastic) {
        checks.push(oracle_stochastic(cfg, sizes));
    }
    let passed = !checks.iter().any(Check::blocks);
    VerifyReport {
        which,
        scenario: file.clone(),
        oracle: sizes,
        checks,
        passed,
    }
}

fn bernoulli(cfg: &ScenarioConfig) -> Check {
    const NAME: &str = "bernoulli";
    let mut dense = cfg.clone();
    dense.output = OutputGrid {
        points: cfg.output.points.max(201),
        geometric: cfg.output.geometric.max(30),
        times: cfg.output.times.clone(),
        include_steps: true,
    };
    let z_options = ZSolverOptions::default();
    let result = (|| -> hetero_sis::Result<Check> {
        let traj = integrate_refined(&dense, 4)?;
        let track = CoefficientTrack::from_trajectory(&traj, &dense)?;
        let z = solve_z_linear(&track, cfg.i0, &traj.times, z_options)?;
        let q = quadrature_solution_series(&track, cfg.i0, &traj.times)?;
        let bound = 10.0 * (cfg.rel_tol + z_options.rel_tol);
        let (mut worst_z, mut worst_q, mut worst_zq) = (0.0f64, 0.0f64, 0.0f64);
        for k in 0..traj.len() {
            let scale = traj.i[k].abs() + cfg.abs_tol / cfg.rel_tol;
            worst_z = worst_z.max((z[k] - traj.i[k]).abs() / scale);
            worst_q = worst_q.max((q[k] - traj.i[k]).abs() / scale);
            worst_zq = worst_zq.max((z[k] - q[k]).abs() / q[k].abs().max(f64::MIN_POSITIVE));
        }
        let mut c = Check::new(NAME, true);
        c.metric("z_error", worst_z)
            .metric("quadrature_error", worst_q)
            .metric("forms_disagreement", worst_zq)
            .metric("bound", bound)
            .metric("points", traj.len() as f64);
        c.require(worst_z <= bound, format!("z-form error {worst_z:e} exceeds {bound:e}"));
        c.require(worst_q <= bound, format!("quadrature error {worst_q:e} exceeds {bound:e}"));
        c.require(worst_zq <= FORMS_TOL, format!("solution forms disagree by {worst_zq:e}"));
        match convergence_indicator(&track) {
            Ok(d) => {
                c.metric("integral1_growth", d.integral1_growth)
                    .metric("integral2_growth", d.integral2_growth);
                c.notes.push(format!("convergence indicator: {:?}", d.verdict).to_lowercase());
            }
            Err(e) => c.notes.push(format!("convergence indicator unavailable: {e}")),
        }
        Ok(c)
    })();
    result.unwrap_or_else(|e| Check::failed(NAME, true, e))
}

fn final_size(cfg: &ScenarioConfig) -> Check {
    const NAME: &str = "final_size";
    let prediction = match predict_for(cfg) {
        Ok(p) => p,
        Err(e) => {
            let mut c = Check::new(NAME, false);
            c.status = Status::Skipped;
            c.notes.push(e.to_string());
            return c;
        }
    };
    let (check, _) = match verify_against_ode(&prediction, cfg, DEFAULT_HORIZON_MULT) {
        Ok(r) => r,
        Err(e) => return Check::failed(NAME, true, e),
    };
    let mut c = Check::new(NAME, true);
    c.notes.push(format!("regime: {}", prediction.regime.as_str()));
    c.metric("chi", prediction.chi)
        .metric("r0_initial", prediction.r0_initial)
        .metric("r_floor", prediction.r_floor)
        .metric("horizon", check.horizon)
        .metric("S_T", check.s_end)
        .metric("I_T", check.i_end)
        .metric("residual", check.residual)
        .metric("first_integral_max_error", check.first_integral_max_error)
        .metric("first_integral_worst_ratio", check.first_integral_worst_ratio);
    if let (Some(s), Some(i)) = (prediction.s_inf, prediction.i_inf) {
        c.metric("S_inf", s).metric("I_inf", i);
    }
    c.require(
        check.first_integral_worst_ratio <= 1.0,
        format!(
            "first integral off by {} tolerances",
            check.first_integral_worst_ratio
        ),
    );
    match prediction.regime {
        Regime::Endemic => c.require(
            check.residual <= FINAL_SIZE_TOL * cfg.gamma,
            format!("residual {} exceeds {}", check.residual, FINAL_SIZE_TOL * cfg.gamma),
        ),
        Regime::ExtinctionThreshold => c.require(
            check.i_end <= cfg.i0,
            format!("I(T) = {} grew above I0 below threshold", check.i_end),
        ),
        Regime::TheoremInapplicable => {}
    }
    c
}

/// Discrepancy between the reduced system and the binned oracle on
/// `[10⁻³, 10⁻¹]/γ`, fitted as `C·t^p`.
pub fn short_horizon_fit(cfg: &ScenarioConfig, k1: usize, k2: usize) -> hetero_sis::Result<PowerLawFit> {
    let (lo, hi) = (1e-3 / cfg.gamma, 1e-1 / cfg.gamma);
    let mut tight = cfg.clone().with_tolerances(1e-12, 1e-14);
    tight.t_end = hi;
    let n = 25;
    let times: Vec<f64> = std::iter::once(0.0)
        .chain((0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)))
        .collect();
    let traj = integrate_at(&tight, &times)?;
    let oracle = integrate_binned_at(&tight, k1, k2, &times)?;
    let report = compare_trajectories(&traj, &oracle.mean)?;
    let (t, e): (Vec<f64>, Vec<f64>) = report.points.iter().skip(1).map(|p| (p.t, p.abs_i)).unzip();
    fit_power_law(&t, &e)
}

fn record_compare(c: &mut Check, report: &CompareReport) {
    c.metric("sup_abs_s", report.sup_abs_s)
        .metric("sup_abs_i", report.sup_abs_i)
        .metric("sup_rel_s", report.sup_rel_s)
        .metric("sup_rel_i", report.sup_rel_i)
        .metric("sup_normalized", report.sup_normalized);
}

/// Runs the reduced system and the binned oracle on the scenario grid.
pub fn binned_pair(
    cfg: &ScenarioConfig,
    k1: usize,
    k2: usize,
) -> hetero_sis::Result<(Trajectory, hetero_sis::oracles::OracleResult, CompareReport)> {
    let times = cfg.output.times_for(cfg.t_end);
    let traj = integrate_at(cfg, &times)?;
    let oracle = integrate_binned_at(cfg, k1, k2, &times)?;
    let report = compare_trajectories(&traj, &oracle.mean)?;
    Ok((traj, oracle, report))
}

fn oracle_binned(cfg: &ScenarioConfig, k1: usize, k2: usize) -> Vec<Check> {
    let homogeneous = cfg.susceptibility.is_degenerate() && cfg.infectivity.is_degenerate();
    let mut checks = Vec::new();
    let (_, oracle, report) = match binned_pair(cfg, k1, k2) {
        Ok(r) => r,
        Err(e) => return vec![Check::failed("oracle_binned", true, e)],
    };
    if homogeneous {
        let mut c = Check::new("oracle_binned_identity", true);
        record_compare(&mut c, &report);
        c.require(
            report.sup_rel() <= IDENTITY_TOL,
            format!("sup relative error {:e} exceeds {IDENTITY_TOL:e}", report.sup_rel()),
        );
        checks.push(c);
        return checks;
    }

    // with infinite variance β̄' is unbounded at t = 0 and the discrepancy
    // grows like t² ln(1/t)
    let finite_variance = cfg.susceptibility.variance().is_finite() && cfg.infectivity.variance().is_finite();
    let mut short = Check::new("oracle_binned_short_horizon", finite_variance);
    match short_horizon_fit(cfg, k1, k2) {
        Ok(fit) => {
            short
                .metric("exponent", fit.exponent)
                .metric("coefficient", fit.coefficient)
                .metric("fit_points", fit.points as f64);
            if finite_variance {
                short.require(
                    fit.exponent >= MIN_EXPONENT,
                    format!("discrepancy exponent {} below {MIN_EXPONENT}", fit.exponent),
                );
            } else {
                short.status = Status::Reported;
                short.notes.push("infinite variance: exponent reported, not gated".into());
            }
        }
        Err(e) => short = Check::failed("oracle_binned_short_horizon", finite_variance, e),
    }
    checks.push(short);

    let mut long = Check::new("oracle_binned_long_horizon", false);
    long.status = Status::Reported;
    record_compare(&mut long, &report);
    long.metric("K1", oracle.k1.unwrap_or(0) as f64)
        .metric("K2", oracle.k2.unwrap_or(0) as f64)
        .metric("t_end", cfg.t_end)
        .metric("oracle_S_T", oracle.mean.final_s())
        .metric("oracle_I_T", oracle.mean.final_i());
    if let Ok(p) = predict_for(cfg) {
        let beta2 = cfg.infectivity.mean();
        long.metric("oracle_final_size_residual", (beta2 * p.chi * oracle.mean.final_s() - cfg.gamma).abs());
    }
    checks.push(long);
    checks
}

fn oracle_stochastic(cfg: &ScenarioConfig, sizes: OracleSizes) -> Check {
    const NAME: &str = "oracle_stochastic";
    let window = cfg.t_end.min(10.0 / cfg.gamma);
    let times: Vec<f64> = (0..=50).map(|k| window * k as f64 / 50.0).collect();
    let result = (|| -> hetero_sis::Result<Check> {
        let binned = integrate_binned_at(cfg, sizes.k1, sizes.k2, &times)?;
        let stochastic = simulate_stochastic_at(cfg, sizes.agents, sizes.replicas, sizes.seed, &times)?;
        let report = compare_trajectories(&stochastic.mean, &binned.mean)?;
        let extinct = stochastic.replicas.iter().filter(|r| r.final_i() == 0.0).count();
        let mut c = Check::new(NAME, true);
        record_compare(&mut c, &report);
        c.metric("window", window)
            .metric("agents", sizes.agents as f64)
            .metric("replicas", sizes.replicas as f64)
            .metric("extinct_replicas", extinct as f64);
        c.require(
            report.sup_normalized <= STOCHASTIC_TOL,
            format!(
                "population-normalized error {} exceeds {STOCHASTIC_TOL}",
                report.sup_normalized
            ),
        );
        Ok(c)
    })();
    result.unwrap_or_else(|e| Check::failed(NAME, true, e))
}

/// One line per check for standard error.
pub fn summary(report: &VerifyReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let status = format!("{:?}", c.status).to_uppercase();
        let key = ["residual", "exponent", "sup_rel_i", "sup_normalized", "z_error"]
            .iter()
            .find_map(|k| c.metrics.get(k).map(|v| format!("{k}={v:.3e}")))
            .unwrap_or_default();
        out.push_str(&format!("{status:<8} {:<30} {key}", c.name));
        if let Some(n) = c.notes.first() {
            out.push_str(&format!("  ({n})"));
        }
        out.push('\n');
    }
    out.push_str(if report.passed { "verification passed\n" } else { "verification FAILED\n" });
    out
}
