//! Endemic final size for heterogeneous susceptibility and constant
//! infectivity.
//!
//! If β₂ is constant and the susceptibility floor χ = lim H₁(λ) as λ → −∞ is
//! positive, a persisting epidemic settles where β₂χS∞ = γ: the susceptible
//! pool that remains is selected down to its least susceptible members.

use serde::Serialize;

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::reduced_ode::{integrate, OutputGrid, ScenarioConfig, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// β₂χN > γ: the closed form applies.
    Endemic,
    /// β₂H₁(0)N ≤ γ: no initial growth.
    ExtinctionThreshold,
    /// Anything else, including χ = 0 and the tie β₂χN = γ.
    TheoremInapplicable,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Endemic => "endemic",
            Regime::ExtinctionThreshold => "extinction_threshold",
            Regime::TheoremInapplicable => "theorem_inapplicable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FinalSizePrediction {
    pub regime: Regime,
    #[serde(rename = "S_inf")]
    pub s_inf: Option<f64>,
    #[serde(rename = "I_inf")]
    pub i_inf: Option<f64>,
    pub chi: f64,
    /// β₂H₁(0)N/γ, the initial reproduction number.
    pub r0_initial: f64,
    /// β₂χN/γ, the reproduction number of the least susceptible members.
    pub r_floor: f64,
}

pub fn predict(susceptibility: &DistributionSpec, beta2: f64, gamma: f64, population: f64) -> Result<FinalSizePrediction> {
    susceptibility.validate()?;
    for (name, v) in [("beta2", beta2), ("gamma", gamma), ("population", population)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")));
        }
    }
    let limits = susceptibility.h_limits();
    let chi = limits.chi;
    let r0_initial = beta2 * limits.mean_at_zero * population / gamma;
    let r_floor = beta2 * chi * population / gamma;
    let (regime, s_inf, i_inf) = if chi > 0.0 && beta2 * chi * population > gamma {
        let s = gamma / (beta2 * chi);
        (Regime::Endemic, Some(s), Some(population - s))
    } else if beta2 * limits.mean_at_zero * population <= gamma {
        (Regime::ExtinctionThreshold, None, None)
    } else {
        (Regime::TheoremInapplicable, None, None)
    };
    Ok(FinalSizePrediction {
        regime,
        s_inf,
        i_inf,
        chi,
        r0_initial,
        r_floor,
    })
}

/// The constant infectivity of a scenario, if it has one.
pub fn constant_infectivity(config: &ScenarioConfig) -> Result<f64> {
    match config.infectivity {
        DistributionSpec::Degenerate { c } => Ok(c),
        other => Err(Error::NotApplicable(format!(
            "the final-size identity needs constant infectivity, got {other}"
        ))),
    }
}

pub fn predict_for(config: &ScenarioConfig) -> Result<FinalSizePrediction> {
    predict(
        &config.susceptibility,
        constant_infectivity(config)?,
        config.gamma,
        config.population,
    )
}

pub const DEFAULT_HORIZON_MULT: f64 = 1e3;

/// Long-horizon check of a prediction against the reduced system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinalSizeCheck {
    pub horizon: f64,
    #[serde(rename = "S_T")]
    pub s_end: f64,
    #[serde(rename = "I_T")]
    pub i_end: f64,
    /// |β₂χS(T) − γ|.
    pub residual: f64,
    /// Largest |I − I₀e^{β₂q₂ − γt}| over the output grid.
    pub first_integral_max_error: f64,
    /// Largest ratio of that deviation to its tolerance
    /// 10·(rel_tol·(1 + β₂q₂ + γt)·Î + abs_tol), Î = I₀e^{β₂q₂ − γt};
    /// at most 1 when the identity holds.
    pub first_integral_worst_ratio: f64,
    /// Relative growth rate |I'/I| at T is below 10⁻³γ.
    pub converged: bool,
}

/// Integrates `config` to `horizon_mult/γ` and checks the final-size
/// identity and the first integral I/I₀ = e^{β₂q₂ − γt}.
pub fn verify_against_ode(
    prediction: &FinalSizePrediction,
    config: &ScenarioConfig,
    horizon_mult: f64,
) -> Result<(FinalSizeCheck, Trajectory)> {
    let beta2 = constant_infectivity(config)?;
    if !(horizon_mult > 0.0 && horizon_mult.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "horizon multiplier must be positive, got {horizon_mult}"
        )));
    }
    let mut cfg = config.clone();
    cfg.t_end = horizon_mult / config.gamma;
    cfg.output = OutputGrid {
        points: config.output.points.max(1001),
        geometric: config.output.geometric.max(40),
        times: Vec::new(),
        include_steps: true,
    };
    let traj = integrate(&cfg)?;
    let (s_end, i_end) = (traj.final_s(), traj.final_i());
    let residual = (beta2 * prediction.chi * s_end - cfg.gamma).abs();

    let mut max_error = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for k in 0..traj.len() {
        let exponent = beta2 * traj.q2[k] - cfg.gamma * traj.times[k];
        let predicted = cfg.i0 * exponent.exp();
        let err = (traj.i[k] - predicted).abs();
        // the exponent is a difference of two terms each known to rel_tol
        let spread = 1.0 + beta2 * traj.q2[k] + cfg.gamma * traj.times[k];
        let tol = 10.0 * (cfg.rel_tol * spread * predicted + cfg.abs_tol);
        max_error = max_error.max(err);
        worst_ratio = worst_ratio.max(err / tol);
    }

    let growth = *traj.beta1_eff.last().unwrap() * beta2 * s_end - cfg.gamma;
    Ok((
        FinalSizeCheck {
            horizon: cfg.t_end,
            s_end,
            i_end,
            residual,
            first_integral_max_error: max_error,
            first_integral_worst_ratio: worst_ratio,
            converged: growth.abs() <= 1e-3 * cfg.gamma,
        },
        traj,
    ))
}
