use std::io::Write;
use std::path::{Path, PathBuf};

use hetero_sis::final_size::predict_for;
use hetero_sis::oracles::compare::compare_trajectories;
use hetero_sis::oracles::{integrate_binned, simulate_stochastic, CompareReport, PowerLawFit};
use hetero_sis::output::{format_number, oracle_csv_string, trajectory_csv_string};
use hetero_sis::{integrate, DistributionSpec, Error};
use serde::Serialize;

use crate::config::{self, ConfigFile};
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::plot::{self, Series};
use crate::verify::{self, OracleSizes, Which};
use crate::{require, Cli, OracleKind};

fn out_dir(cli: &Cli) -> CliResult<PathBuf> {
    let dir = require(&cli.out, "--out DIR")?.clone();
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn load(cli: &Cli) -> CliResult<(ConfigFile, hetero_sis::ScenarioConfig)> {
    config::load(require(&cli.config, "--config PATH")?)
}

fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text.into_bytes())
}

pub fn simulate(cli: &Cli) -> CliResult<()> {
    let (file, cfg) = load(cli)?;
    let dir = out_dir(cli)?;
    let mut manifest = RunManifest::start(Some(file));
    let traj = manifest.time("integrate", || integrate(&cfg))?;
    if cli.format.csv() {
        manifest.write(&dir, "trajectory.csv", trajectory_csv_string(&traj)?.as_bytes())?;
    }
    if cli.format.json() {
        manifest.write(&dir, "trajectory.json", &json_bytes(&traj)?)?;
    }
    if cli.plot {
        manifest.write_plot(&dir, "plot.svg", plot::trajectory_plot("Reduced system", &traj));
    }
    println!(
        "S(T) = {}, I(T) = {} at T = {}",
        traj.final_s(),
        traj.final_i(),
        cfg.t_end
    );
    manifest.finish(&dir)
}

pub fn final_size(cli: &Cli) -> CliResult<()> {
    let (_, cfg) = load(cli)?;
    let prediction = predict_for(&cfg).map_err(|e| match e {
        Error::NotApplicable(m) => CliError::Usage(m),
        other => CliError::Runtime(other.to_string()),
    })?;
    println!("{}", serde_json::to_string(&prediction)?);
    Ok(())
}

pub fn verify(cli: &Cli, which: Which) -> CliResult<()> {
    let (file, cfg) = load(cli)?;
    let sizes = OracleSizes {
        k1: cli.k1,
        k2: cli.k2,
        agents: cli.agents,
        replicas: cli.replicas,
        seed: cli.seed,
    };
    let mut manifest = RunManifest::start(Some(file.clone()));
    if matches!(which, Which::OracleStochastic | Which::All) {
        manifest.seeds.push(cli.seed);
    }
    let report = manifest.time("verify", || verify::run(which, &file, &cfg, sizes));
    eprint!("{}", verify::summary(&report));
    let bytes = json_bytes(&report)?;
    match &cli.out {
        Some(_) => {
            let dir = out_dir(cli)?;
            manifest.write(&dir, "report.json", &bytes)?;
            manifest.finish(&dir)?;
        }
        None => std::io::stdout().write_all(&bytes)?,
    }
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| c.blocks()).map(|c| c.name).collect();
        Err(CliError::Runtime(format!("failed checks: {}", failed.join(", "))))
    }
}

fn default_lambdas() -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=12).rev().map(|k| -(10f64.powf(-3.0 + 0.5 * k as f64))).collect();
    grid.push(0.0);
    grid
}

pub fn dist(spec: &str, lambdas: &[f64], csv: Option<&Path>) -> CliResult<()> {
    let d: DistributionSpec = spec.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let grid = if lambdas.is_empty() { default_lambdas() } else { lambdas.to_vec() };
    let limits = d.h_limits();
    let mut text = format!(
        "# distribution = {d}\n# mean = {:?}\n# chi = {:?}\nlambda,M,H,sigma2\n",
        limits.mean_at_zero, limits.chi
    );
    for &lambda in &grid {
        let usage = |e: Error| CliError::Usage(e.to_string());
        let m = d.mgf(lambda).map_err(usage)?;
        let h = d.h(lambda).map_err(usage)?;
        let v = d.variance_at(lambda).map_err(usage)?;
        text.push_str(&[lambda, m, h, v].map(format_number).join(","));
        text.push('\n');
    }
    match csv {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareOutput<'a> {
    oracle: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    k1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_agents: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    replicas: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    short_horizon: Option<PowerLawFit>,
    report: &'a CompareReport,
}

pub fn compare(cli: &Cli, kind: OracleKind) -> CliResult<()> {
    let (file, cfg) = load(cli)?;
    let dir = out_dir(cli)?;
    let mut manifest = RunManifest::start(Some(file));
    let traj = manifest.time("integrate", || integrate(&cfg))?;
    let oracle = match kind {
        OracleKind::Binned => manifest.time("binned oracle", || integrate_binned(&cfg, cli.k1, cli.k2))?,
        OracleKind::Stochastic => {
            manifest.seeds.push(cli.seed);
            manifest.time("stochastic oracle", || {
                simulate_stochastic(&cfg, cli.agents, cli.replicas, cli.seed)
            })?
        }
    };
    let report = compare_trajectories(&traj, &oracle.mean)?;
    let heterogeneous = !(cfg.susceptibility.is_degenerate() && cfg.infectivity.is_degenerate());
    let short_horizon = match kind {
        OracleKind::Binned if heterogeneous => {
            Some(manifest.time("short-horizon fit", || verify::short_horizon_fit(&cfg, cli.k1, cli.k2))?)
        }
        _ => None,
    };
    let stochastic = kind == OracleKind::Stochastic;
    let out = CompareOutput {
        oracle: oracle.source.as_str(),
        k1: oracle.k1,
        k2: oracle.k2,
        n_agents: oracle.n_agents,
        replicas: stochastic.then_some(cli.replicas),
        seed: stochastic.then_some(cli.seed),
        short_horizon,
        report: &report,
    };
    eprintln!(
        "sup relative error: S {:.3e}, I {:.3e}; population-normalized {:.3e}",
        report.sup_rel_s, report.sup_rel_i, report.sup_normalized
    );
    if cli.format.csv() {
        manifest.write(&dir, "trajectory.csv", trajectory_csv_string(&traj)?.as_bytes())?;
        manifest.write(&dir, "oracle.csv", oracle_csv_string(&oracle)?.as_bytes())?;
    }
    if cli.format.json() {
        manifest.write(&dir, "trajectory.json", &json_bytes(&traj)?)?;
    }
    manifest.write(&dir, "compare.json", &json_bytes(&out)?)?;
    if cli.plot {
        let svg = plot::line_plot(
            &format!("Reduced system vs {} oracle", oracle.source.as_str()),
            &traj.times,
            &[
                Series {
                    label: "I reduced",
                    color: "#d62728",
                    values: &traj.i,
                },
                Series {
                    label: "I oracle",
                    color: "#2ca02c",
                    values: &oracle.mean.i,
                },
            ],
        );
        manifest.write_plot(&dir, "compare.svg", svg);
    }
    manifest.finish(&dir)
}
