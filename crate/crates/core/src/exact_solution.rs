//! Closed-form solution of the infected equation through its Bernoulli form.
//!
//! With the population-level contact rate β(t) = β̄₁(t)β̄₂(t), the infected
//! mass obeys
//!
//! ```text
//! I' = (βN − γ) I − β I²
//! ```
//!
//! so `z = 1/I` satisfies the linear equation `z' = (γ − βN) z + β`, and
//!
//! ```text
//! I(t) = e^{A(t)} / (1/I₀ + ∫₀ᵗ β e^{A}),   A(t) = ∫₀ᵗ (βN − γ).
//! ```
//!
//! Both forms are evaluated here against an interpolated track of β(t),
//! typically taken from a reduced-system trajectory.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::Dopri5;
use crate::quadrature;
use crate::reduced_ode::{ScenarioConfig, Trajectory};

/// β(t) sampled at increasing times, interpolated by a piecewise cubic
/// Hermite polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTrack {
    times: Vec<f64>,
    beta: Vec<f64>,
    slopes: Vec<f64>,
    /// ∫β from the first node to each node.
    cumulative: Vec<f64>,
    pub gamma: f64,
    pub population: f64,
}

impl CoefficientTrack {
    /// Builds a track with shape-preserving (Fritsch–Butland) slopes.
    pub fn new(times: Vec<f64>, beta: Vec<f64>, gamma: f64, population: f64) -> Result<Self> {
        Self::check(&times, &beta, gamma, population)?;
        let slopes = pchip_slopes(&times, &beta);
        Ok(Self::assemble(times, beta, slopes, gamma, population))
    }

    /// Builds a track with caller-supplied slopes β'(t) at the nodes.
    pub fn with_slopes(times: Vec<f64>, beta: Vec<f64>, slopes: Vec<f64>, gamma: f64, population: f64) -> Result<Self> {
        Self::check(&times, &beta, gamma, population)?;
        if slopes.len() != times.len() {
            return Err(Error::GridMismatch(format!(
                "{} slopes for {} nodes",
                slopes.len(),
                times.len()
            )));
        }
        let fallback = pchip_slopes(&times, &beta);
        let slopes = slopes
            .into_iter()
            .zip(fallback)
            .map(|(m, f)| if m.is_finite() { m } else { f })
            .collect();
        Ok(Self::assemble(times, beta, slopes, gamma, population))
    }

    /// The track of β̄₁β̄₂ along a reduced-system trajectory.
    ///
    /// Slopes come from the system itself:
    /// (β̄₁β̄₂)' = −σ₁²(q₁)β̄₂²I + σ₂²(q₂)β̄₁²S. Where a slope is infinite
    /// (Pareto susceptibility with α ≤ 2 at t = 0) a shape-preserving
    /// estimate is used instead.
    pub fn from_trajectory(traj: &Trajectory, config: &ScenarioConfig) -> Result<Self> {
        let n = traj.len();
        let mut beta = Vec::with_capacity(n);
        let mut slopes = Vec::with_capacity(n);
        for k in 0..n {
            let (b1, b2) = (traj.beta1_eff[k], traj.beta2_eff[k]);
            beta.push(b1 * b2);
            let v1 = config.susceptibility.variance_at(traj.q1[k].min(0.0))?;
            let v2 = config.infectivity.variance_at(traj.q2[k].max(0.0))?;
            let d1 = if v1 == 0.0 { 0.0 } else { -v1 * b2 * traj.i[k] };
            let d2 = if v2 == 0.0 { 0.0 } else { v2 * b1 * traj.s[k] };
            slopes.push(d1 * b2 + b1 * d2);
        }
        Self::with_slopes(traj.times.clone(), beta, slopes, config.gamma, config.population)
    }

    fn check(times: &[f64], beta: &[f64], gamma: f64, population: f64) -> Result<()> {
        if times.len() < 2 || times.len() != beta.len() {
            return Err(Error::GridMismatch(format!(
                "track needs at least two nodes with one value each, got {} times and {} values",
                times.len(),
                beta.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::GridMismatch("track times must be finite and strictly increasing".into()));
        }
        if beta.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(Error::InvalidParameter("track values must be finite and nonnegative".into()));
        }
        if !(gamma > 0.0 && gamma.is_finite() && population > 0.0 && population.is_finite()) {
            return Err(Error::InvalidParameter("gamma and population must be positive".into()));
        }
        Ok(())
    }

    fn assemble(times: Vec<f64>, beta: Vec<f64>, slopes: Vec<f64>, gamma: f64, population: f64) -> Self {
        let mut cumulative = vec![0.0; times.len()];
        for k in 1..times.len() {
            let h = times[k] - times[k - 1];
            cumulative[k] = cumulative[k - 1]
                + h * (beta[k - 1] + beta[k]) / 2.0
                + h * h * (slopes[k - 1] - slopes[k]) / 12.0;
        }
        Self {
            times,
            beta,
            slopes,
            cumulative,
            gamma,
            population,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.beta
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    fn covers(&self, t: f64) -> Result<()> {
        if t >= self.start() && t <= self.end() {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "time {t} outside track range [{}, {}]",
                self.start(),
                self.end()
            )))
        }
    }

    fn interval(&self, t: f64) -> usize {
        match self.times.partition_point(|&x| x <= t) {
            0 => 0,
            k => (k - 1).min(self.times.len() - 2),
        }
    }

    /// Interpolated β(t).
    pub fn beta_at(&self, t: f64) -> f64 {
        let k = self.interval(t);
        let h = self.times[k + 1] - self.times[k];
        let s = (t - self.times[k]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * self.beta[k]
            + (s3 - 2.0 * s2 + s) * h * self.slopes[k]
            + (-2.0 * s3 + 3.0 * s2) * self.beta[k + 1]
            + (s3 - s2) * h * self.slopes[k + 1]
    }

    /// Exact integral of the interpolant from the first node to `t`.
    pub fn integral(&self, t: f64) -> f64 {
        let k = self.interval(t);
        let h = self.times[k + 1] - self.times[k];
        let s = (t - self.times[k]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let s4 = s3 * s;
        self.cumulative[k]
            + h * (self.beta[k] * (s - s3 + s4 / 2.0)
                + self.beta[k + 1] * (s3 - s4 / 2.0)
                + h * self.slopes[k] * (s2 / 2.0 - 2.0 * s3 / 3.0 + s4 / 4.0)
                + h * self.slopes[k + 1] * (s4 / 4.0 - s3 / 3.0))
    }

    /// A(t) = ∫(βN − γ) from the first node.
    pub fn growth_exponent(&self, t: f64) -> f64 {
        self.population * self.integral(t) - self.gamma * (t - self.start())
    }
}

/// Shape-preserving slopes: weighted harmonic means at interior nodes,
/// three-point one-sided estimates at the ends.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![d[0], d[0]];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| -> f64 {
        let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if m.signum() != d0.signum() || d0 == 0.0 {
            0.0
        } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            m
        }
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

/// Options for the linear z-equation solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZSolverOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for ZSolverOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
        }
    }
}

/// Integrates `z' = (γ − βN) z + β`, `z = 1/I`, from the first track node
/// and returns I at `times`.
pub fn solve_z_linear(track: &CoefficientTrack, i0: f64, times: &[f64], options: ZSolverOptions) -> Result<Vec<f64>> {
    if !(i0 > 0.0 && i0.is_finite()) {
        return Err(Error::InvalidParameter(format!("I0 must be positive, got {i0}")));
    }
    for &t in times {
        track.covers(t)?;
    }
    let (gamma, n) = (track.gamma, track.population);
    let solver = Dopri5::new(options.rel_tol, options.abs_tol);
    let sol = solver.solve_observed(
        |t, z, dz| {
            let b = track.beta_at(t);
            dz[0] = (gamma - b * n) * z[0] + b;
            Ok(())
        },
        track.start(),
        &[1.0 / i0],
        times,
        false,
        |t, z| {
            if z[0] <= 0.0 {
                Err(Error::ZeroCrossing(t))
            } else {
                Ok(())
            }
        },
    )?;
    sol.states
        .iter()
        .zip(&sol.times)
        .map(|(z, &t)| {
            if z[0] > 0.0 {
                Ok(1.0 / z[0])
            } else {
                Err(Error::ZeroCrossing(t))
            }
        })
        .collect()
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

const QUAD_REL_TOL: f64 = 1e-13;

/// ln ∫ β e^{A} over `[a, b]` inside one track interval.
fn ln_piece(track: &CoefficientTrack, a: f64, b: f64) -> Result<f64> {
    if b <= a {
        return Ok(f64::NEG_INFINITY);
    }
    let shift = track.growth_exponent(a).max(track.growth_exponent(b));
    let (v, _) = quadrature::integrate(
        |s| track.beta_at(s) * (track.growth_exponent(s) - shift).exp(),
        a,
        b,
        0.0,
        QUAD_REL_TOL,
    )?;
    Ok(if v > 0.0 { shift + v.ln() } else { f64::NEG_INFINITY })
}

/// Running value of ln J(t), J(t) = ∫₀ᵗ β e^{A}, over sorted times.
fn ln_j_series(track: &CoefficientTrack, times: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(times.len());
    let mut node = 0;
    let mut ln_j_node = f64::NEG_INFINITY;
    for &t in times {
        track.covers(t)?;
        while node + 1 < track.times.len() && track.times[node + 1] <= t {
            ln_j_node = log_add_exp(ln_j_node, ln_piece(track, track.times[node], track.times[node + 1])?);
            node += 1;
        }
        out.push(log_add_exp(ln_j_node, ln_piece(track, track.times[node], t)?));
    }
    Ok(out)
}

/// I(t) from the quadrature form of the solution, at sorted `times`.
///
/// Evaluated in log space, I = exp(A − ln(1/I₀ + J)), so long endemic
/// horizons where A grows linearly do not overflow.
pub fn quadrature_solution_series(track: &CoefficientTrack, i0: f64, times: &[f64]) -> Result<Vec<f64>> {
    if !(i0 > 0.0 && i0.is_finite()) {
        return Err(Error::InvalidParameter(format!("I0 must be positive, got {i0}")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::GridMismatch("times must be sorted".into()));
    }
    let ln_j = ln_j_series(track, times)?;
    times
        .iter()
        .zip(ln_j)
        .map(|(&t, lj)| {
            let ln_denominator = log_add_exp(-i0.ln(), lj);
            if !ln_denominator.is_finite() {
                return Err(Error::Singular {
                    t,
                    denominator: ln_denominator.exp(),
                });
            }
            let v = (track.growth_exponent(t) - ln_denominator).exp();
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Singular {
                    t,
                    denominator: ln_denominator.exp(),
                })
            }
        })
        .collect()
}

/// I(t) from the quadrature form of the solution.
pub fn quadrature_solution(track: &CoefficientTrack, i0: f64, t: f64) -> Result<f64> {
    Ok(quadrature_solution_series(track, i0, &[t])?[0])
}

/// Whether the finite horizon shows the two improper integrals diverging.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceDiagnostic {
    /// Mean slope of A = ∫(βN − γ) over the last quarter of the track.
    pub integral1_growth: f64,
    /// Mean slope of ln ∫β e^{A} over the last quarter of the track.
    pub integral2_growth: f64,
    pub verdict: Verdict,
}

/// Reports growth trends of the two integrals over the last quarter of the
/// track. A finite horizon can exhibit divergence but never certify
/// convergence, so the only alternative verdict is inconclusive.
pub fn convergence_indicator(track: &CoefficientTrack) -> Result<ConvergenceDiagnostic> {
    let t1 = track.end();
    let t0 = track.start() + 0.75 * (t1 - track.start());
    let width = t1 - t0;
    let integral1_growth = (track.growth_exponent(t1) - track.growth_exponent(t0)) / width;
    let ln_j = ln_j_series(track, &[t0, t1])?;
    let integral2_growth = if ln_j[0].is_finite() {
        (ln_j[1] - ln_j[0]) / width
    } else {
        0.0
    };
    let delta = 1e-6 * track.gamma;
    let verdict = if integral1_growth > delta && integral2_growth > delta {
        Verdict::Diverging
    } else {
        Verdict::Inconclusive
    };
    Ok(ConvergenceDiagnostic {
        integral1_growth,
        integral2_growth,
        verdict,
    })
}
