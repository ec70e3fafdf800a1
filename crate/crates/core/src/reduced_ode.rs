//! The four-dimensional reduced SIS system.
//!
//! State `(S, I, q₁, q₂)` evolves as
//!
//! ```text
//! S' = -β̄₁β̄₂ S I + γ I      q₁' = -β̄₂ I
//! I' =  β̄₁β̄₂ S I - γ I      q₂' =  β̄₁ S
//! ```
//!
//! with `β̄ᵢ = Hᵢ(qᵢ)`, the current mean susceptibility of the susceptible
//! class and the current mean infectivity of the infected class.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::ode::Dopri5;

/// Which output times to report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputGrid {
    /// Evenly spaced points on `[0, t_end]`, endpoints included.
    pub points: usize,
    /// Log-spaced points on `[t_end·10⁻⁶, t_end]`, to resolve the onset.
    pub geometric: usize,
    /// Extra times.
    pub times: Vec<f64>,
    /// Also report every accepted integrator step.
    pub include_steps: bool,
}

impl Default for OutputGrid {
    fn default() -> Self {
        Self {
            points: 201,
            geometric: 0,
            times: Vec::new(),
            include_steps: false,
        }
    }
}

impl OutputGrid {
    pub fn uniform(points: usize) -> Self {
        Self {
            points,
            ..Self::default()
        }
    }

    /// Sorted, deduplicated output times on `[0, t_end]`.
    pub fn times_for(&self, t_end: f64) -> Vec<f64> {
        let mut out = vec![0.0, t_end];
        if self.points >= 2 {
            let n = self.points - 1;
            out.extend((0..=n).map(|k| t_end * k as f64 / n as f64));
        }
        if self.geometric >= 2 {
            let lo = (t_end * 1e-6).ln();
            let hi = t_end.ln();
            let n = self.geometric - 1;
            out.extend((0..=n).map(|k| (lo + (hi - lo) * k as f64 / n as f64).exp().min(t_end)));
        }
        out.extend(self.times.iter().copied().filter(|t| (0.0..=t_end).contains(t)));
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// A fully specified epidemic scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub population: f64,
    pub i0: f64,
    pub gamma: f64,
    /// Distribution of β₁.
    pub susceptibility: DistributionSpec,
    /// Distribution of β₂.
    pub infectivity: DistributionSpec,
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Largest integrator step; unbounded when `None`.
    pub max_step: Option<f64>,
    pub output: OutputGrid,
}

impl ScenarioConfig {
    pub fn new(
        population: f64,
        i0: f64,
        gamma: f64,
        susceptibility: DistributionSpec,
        infectivity: DistributionSpec,
        t_end: f64,
    ) -> Self {
        Self {
            population,
            i0,
            gamma,
            susceptibility,
            infectivity,
            t_end,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: None,
            output: OutputGrid::default(),
        }
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_output(mut self, output: OutputGrid) -> Self {
        self.output = output;
        self
    }

    pub fn s0(&self) -> f64 {
        self.population - self.i0
    }

    /// Checks parameter ranges and that the infectivity tilt stays inside
    /// its MGF domain up to `t_end`.
    ///
    /// `I0 = 0` is accepted: it is the disease-free equilibrium.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("population", self.population)?;
        positive("gamma", self.gamma)?;
        positive("t_end", self.t_end)?;
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        if let Some(h) = self.max_step {
            positive("max_step", h)?;
        }
        if !(self.i0.is_finite() && self.i0 >= 0.0 && self.i0 <= self.population) {
            return Err(Error::InvalidParameter(format!(
                "i0 must lie in [0, population], got {}",
                self.i0
            )));
        }
        self.susceptibility.validate()?;
        self.infectivity.validate()?;
        if self.output.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter("output times must be finite".into()));
        }

        let domain = self.infectivity.domain();
        if !domain.admits_positive_tilts() {
            return Err(Error::InvalidParameter(format!(
                "infectivity {} has no MGF for positive tilts; the infectivity tilt q2 grows \
                 from 0, so only degenerate or gamma infectivity is admissible",
                self.infectivity
            )));
        }
        // q2' = β̄₁S ≤ H₁(0)·N since β̄₁ is nonincreasing
        let q2_bound = self.susceptibility.mean() * self.population * self.t_end;
        if !domain.contains(q2_bound) {
            return Err(Error::InvalidParameter(format!(
                "infectivity tilt bound q2(t_end) <= {q2_bound} reaches the edge {} of the MGF \
                 domain of {}; shorten t_end",
                domain.upper, self.infectivity
            )));
        }
        Ok(())
    }

    pub(crate) fn solver(&self) -> Dopri5 {
        Dopri5::new(self.rel_tol, self.abs_tol).with_max_step(self.max_step.unwrap_or(f64::INFINITY))
    }
}

/// Time series of the reduced system.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    #[serde(rename = "t")]
    pub times: Vec<f64>,
    #[serde(rename = "S")]
    pub s: Vec<f64>,
    #[serde(rename = "I")]
    pub i: Vec<f64>,
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    pub beta1_eff: Vec<f64>,
    pub beta2_eff: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            times: Vec::with_capacity(n),
            s: Vec::with_capacity(n),
            i: Vec::with_capacity(n),
            q1: Vec::with_capacity(n),
            q2: Vec::with_capacity(n),
            beta1_eff: Vec::with_capacity(n),
            beta2_eff: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, t: f64, s: f64, i: f64, q1: f64, q2: f64, beta1: f64, beta2: f64) {
        self.times.push(t);
        self.s.push(s);
        self.i.push(i);
        self.q1.push(q1);
        self.q2.push(q2);
        self.beta1_eff.push(beta1);
        self.beta2_eff.push(beta2);
    }

    pub fn final_s(&self) -> f64 {
        *self.s.last().unwrap_or(&f64::NAN)
    }

    pub fn final_i(&self) -> f64 {
        *self.i.last().unwrap_or(&f64::NAN)
    }
}

fn effective_rates(config: &ScenarioConfig, q1: f64, q2: f64) -> Result<(f64, f64)> {
    Ok((
        config.susceptibility.h(q1.min(0.0))?,
        config.infectivity.h(q2.max(0.0))?,
    ))
}

fn rhs(config: &ScenarioConfig, y: &[f64], dy: &mut [f64]) -> Result<()> {
    let (s, i) = (y[0], y[1]);
    let (b1, b2) = effective_rates(config, y[2], y[3])?;
    let flow = b1 * b2 * s * i - config.gamma * i;
    dy[0] = -flow;
    dy[1] = flow;
    dy[2] = -b2 * i;
    dy[3] = b1 * s;
    Ok(())
}

/// Integrates the scenario on its configured output grid.
pub fn integrate(config: &ScenarioConfig) -> Result<Trajectory> {
    let times = config.output.times_for(config.t_end);
    integrate_grid(config, &times, config.output.include_steps)
}

/// Integrates the scenario and reports exactly the given times, which must
/// be sorted and lie in `[0, ∞)`.
pub fn integrate_at(config: &ScenarioConfig, times: &[f64]) -> Result<Trajectory> {
    integrate_grid(config, times, false)
}

/// Integrates the scenario and reports every accepted step, each split into
/// `subdivisions` equal parts through the integrator's continuous output,
/// together with the configured output grid.
///
/// Suited for building interpolation tracks of the effective rates.
pub fn integrate_refined(config: &ScenarioConfig, subdivisions: usize) -> Result<Trajectory> {
    let coarse = integrate_grid(config, &config.output.times_for(config.t_end), true)?;
    let parts = subdivisions.max(1);
    let mut times = Vec::with_capacity(coarse.len() * parts);
    for w in coarse.times.windows(2) {
        let h = (w[1] - w[0]) / parts as f64;
        times.extend((0..parts).map(|k| w[0] + h * k as f64));
    }
    times.push(config.t_end);
    times.dedup();
    integrate_grid(config, &times, false)
}

fn integrate_grid(config: &ScenarioConfig, times: &[f64], include_steps: bool) -> Result<Trajectory> {
    config.validate()?;
    let y0 = [config.s0(), config.i0, 0.0, 0.0];
    let sol = config
        .solver()
        .solve(|_, y, dy| rhs(config, y, dy), 0.0, &y0, times, include_steps)?;
    let mut traj = Trajectory::with_capacity(sol.times.len());
    for (&t, y) in sol.times.iter().zip(&sol.states) {
        let (b1, b2) = effective_rates(config, y[2], y[3])?;
        traj.push(t, y[0], y[1], y[2], y[3], b1, b2);
    }
    Ok(traj)
}

/// Which transmission parameter a severity comparison varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeterogeneityTarget {
    Susceptibility,
    Infectivity,
}

/// Outcome of comparing two equal-mean distributions at a short probe time.
#[derive(Debug, Clone, PartialEq)]
pub struct SeverityReport {
    pub target: HeterogeneityTarget,
    pub t_probe: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub variance_a: f64,
    pub variance_b: f64,
    /// Ordering of `s_a` relative to `s_b`.
    pub ordering: Ordering,
    /// The ordering predicted from the variances.
    pub expected: Ordering,
}

impl SeverityReport {
    pub fn consistent(&self) -> bool {
        self.ordering == self.expected
    }
}

pub fn default_probe(gamma: f64) -> f64 {
    0.01 / gamma
}

/// Integrates `base` twice, once with each of `a` and `b` substituted for
/// the targeted distribution, and compares S at `t_probe`.
///
/// Higher susceptibility variance should leave more susceptibles early on;
/// higher infectivity variance should leave fewer.
pub fn severity_compare(
    base: &ScenarioConfig,
    target: HeterogeneityTarget,
    a: DistributionSpec,
    b: DistributionSpec,
    t_probe: f64,
) -> Result<SeverityReport> {
    if (a.mean() - b.mean()).abs() > 1e-12 * a.mean().abs().max(b.mean().abs()).max(1.0) {
        return Err(Error::MeanMismatch {
            a: a.mean(),
            b: b.mean(),
        });
    }
    if !(t_probe > 0.0 && t_probe.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_probe must be positive, got {t_probe}")));
    }
    let run = |d: DistributionSpec| -> Result<f64> {
        let mut cfg = base.clone();
        match target {
            HeterogeneityTarget::Susceptibility => cfg.susceptibility = d,
            HeterogeneityTarget::Infectivity => cfg.infectivity = d,
        }
        cfg.t_end = t_probe;
        cfg.output = OutputGrid::uniform(2);
        let traj = integrate_at(&cfg, &[0.0, t_probe])?;
        Ok(traj.final_s())
    };
    let s_a = run(a)?;
    let s_b = run(b)?;
    let (variance_a, variance_b) = (a.variance(), b.variance());
    let by_variance = variance_a.partial_cmp(&variance_b).unwrap_or(Ordering::Equal);
    let expected = match target {
        HeterogeneityTarget::Susceptibility => by_variance,
        HeterogeneityTarget::Infectivity => by_variance.reverse(),
    };
    Ok(SeverityReport {
        target,
        t_probe,
        s_a,
        s_b,
        variance_a,
        variance_b,
        ordering: s_a.partial_cmp(&s_b).unwrap_or(Ordering::Equal),
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degenerate(c: f64) -> DistributionSpec {
        DistributionSpec::degenerate(c).unwrap()
    }

    fn homogeneous(beta: f64, n: f64, i0: f64, t_end: f64) -> ScenarioConfig {
        ScenarioConfig::new(n, i0, 1.0, degenerate(beta), degenerate(1.0), t_end)
    }

    #[test]
    fn homogeneous_reaches_logistic_equilibrium() {
        let traj = integrate(&homogeneous(0.002, 1000.0, 1.0, 40.0)).unwrap();
        assert!((traj.final_i() - 500.0).abs() < 0.5, "I(40) = {}", traj.final_i());
    }

    #[test]
    fn homogeneous_matches_logistic_closed_form() {
        let (beta, n, i0, gamma) = (0.002, 1000.0, 1.0, 1.0);
        let traj = integrate(&homogeneous(beta, n, i0, 40.0)).unwrap();
        let r = beta * n - gamma;
        let k = r / beta;
        for (t, i) in traj.times.iter().zip(&traj.i) {
            let exact = k / (1.0 + (k / i0 - 1.0) * (-r * t).exp());
            assert!((i - exact).abs() <= 1e-6 * exact, "t={t}: {i} vs {exact}");
        }
    }

    #[test]
    fn zero_initial_infection_is_an_equilibrium() {
        let cfg = ScenarioConfig::new(
            50.0,
            0.0,
            1.0,
            DistributionSpec::pareto(0.5, 2.0).unwrap(),
            degenerate(1.0),
            10.0,
        );
        let traj = integrate(&cfg).unwrap();
        assert!(traj.i.iter().all(|&i| i == 0.0));
        assert!(traj.s.iter().all(|&s| s == 50.0));
    }

    #[test]
    fn pareto_infectivity_is_rejected() {
        let cfg = ScenarioConfig::new(
            10.0,
            0.1,
            1.0,
            degenerate(1.0),
            DistributionSpec::pareto(0.5, 2.0).unwrap(),
            10.0,
        );
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("positive tilts"));
    }

    #[test]
    fn gamma_infectivity_horizon_is_capped() {
        let gamma_inf = DistributionSpec::gamma(2.0, 0.5).unwrap();
        // H₁(0)·N·t_end = 1·10·0.1 = 1 < 1/θ = 2
        let ok = ScenarioConfig::new(10.0, 0.1, 1.0, degenerate(1.0), gamma_inf, 0.1);
        assert!(ok.validate().is_ok());
        let too_long = ScenarioConfig { t_end: 0.2, ..ok };
        assert!(too_long.validate().is_err());
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        let base = homogeneous(0.002, 1000.0, 1.0, 40.0);
        assert!(ScenarioConfig { i0: 1001.0, ..base.clone() }.validate().is_err());
        assert!(ScenarioConfig { i0: -1.0, ..base.clone() }.validate().is_err());
        assert!(ScenarioConfig { gamma: 0.0, ..base.clone() }.validate().is_err());
        assert!(ScenarioConfig { t_end: f64::NAN, ..base.clone() }.validate().is_err());
        assert!(ScenarioConfig { max_step: Some(-1.0), ..base }.validate().is_err());
    }

    #[test]
    fn output_grid_merges_and_sorts() {
        let grid = OutputGrid {
            points: 3,
            geometric: 3,
            times: vec![0.7, 5.0, 20.0],
            include_steps: false,
        };
        let times = grid.times_for(10.0);
        assert_eq!(times.first(), Some(&0.0));
        assert_eq!(times.last(), Some(&10.0));
        assert!(times.contains(&5.0) && times.contains(&0.7));
        assert!(!times.contains(&20.0));
        assert!(times.windows(2).all(|w| w[0] < w[1]));
        assert!(times.iter().any(|&t| (t - 1e-5).abs() < 1e-12));
    }

    #[test]
    fn include_steps_adds_internal_points() {
        let mut cfg = homogeneous(0.002, 1000.0, 1.0, 40.0);
        cfg.output = OutputGrid {
            points: 2,
            include_steps: true,
            ..OutputGrid::default()
        };
        let traj = integrate(&cfg).unwrap();
        assert!(traj.len() > 10);
        assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn severity_ordering_for_gamma_pair() {
        let base = ScenarioConfig::new(100.0, 1.0, 1.0, degenerate(1.0), degenerate(0.05), 1.0);
        let high = DistributionSpec::gamma(1.0, 1.0).unwrap();
        let low = DistributionSpec::gamma(4.0, 0.25).unwrap();
        let rep = severity_compare(&base, HeterogeneityTarget::Susceptibility, high, low, 0.01).unwrap();
        assert_eq!(rep.ordering, Ordering::Greater);
        assert!(rep.consistent());

        let base = ScenarioConfig::new(100.0, 1.0, 1.0, degenerate(0.01), degenerate(1.0), 1.0);
        let rep = severity_compare(
            &base,
            HeterogeneityTarget::Infectivity,
            DistributionSpec::gamma(1.0, 1.0).unwrap(),
            DistributionSpec::gamma(4.0, 0.25).unwrap(),
            0.01,
        )
        .unwrap();
        assert_eq!(rep.ordering, Ordering::Less);
        assert!(rep.consistent());
    }

    #[test]
    fn severity_identical_distributions_tie_exactly() {
        let base = ScenarioConfig::new(100.0, 1.0, 1.0, degenerate(1.0), degenerate(0.05), 1.0);
        let d = DistributionSpec::gamma(2.0, 0.5).unwrap();
        let rep = severity_compare(&base, HeterogeneityTarget::Susceptibility, d, d, 0.01).unwrap();
        assert_eq!(rep.s_a, rep.s_b);
        assert_eq!(rep.ordering, Ordering::Equal);
    }

    #[test]
    fn severity_requires_equal_means() {
        let base = ScenarioConfig::new(100.0, 1.0, 1.0, degenerate(1.0), degenerate(0.05), 1.0);
        let err = severity_compare(
            &base,
            HeterogeneityTarget::Susceptibility,
            DistributionSpec::gamma(1.0, 1.0).unwrap(),
            DistributionSpec::gamma(1.0, 1.1).unwrap(),
            0.01,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MeanMismatch { .. }));
    }

    #[test]
    fn trajectory_serializes_with_short_column_names() {
        let mut t = Trajectory::default();
        t.push(0.0, 1.0, 2.0, 0.0, 0.0, 1.0, 1.0);
        let v = serde_json::to_value(&t).unwrap();
        for key in ["t", "S", "I", "q1", "q2", "beta1_eff", "beta2_eff"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
