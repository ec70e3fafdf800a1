//! Brute-force models of the same epidemic, used to check the reduction.
//!
//! Both oracles follow individuals (or cohorts) that keep a fixed pair of
//! transmission parameters for life: a node that recovers rejoins the
//! susceptible class with its own susceptibility and infectivity.

pub mod binned;
pub mod compare;
pub mod stochastic;

use serde::Serialize;

use crate::reduced_ode::Trajectory;

pub use binned::{integrate_binned, quantile_bins, Bin, DEFAULT_BINS};
pub use compare::{compare, fit_power_law, CompareReport, PowerLawFit};
pub use stochastic::{simulate_stochastic, Fenwick};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleSource {
    Binned,
    Stochastic,
}

impl OracleSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            OracleSource::Binned => "binned",
            OracleSource::Stochastic => "stochastic",
        }
    }
}

/// Aggregate output of an oracle, comparable to a reduced trajectory.
///
/// For oracles, `q1` and `q2` are the integrated infection pressure and
/// susceptible exposure, and the effective rates are the current mass-
/// weighted means (0 when a class is empty).
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub source: OracleSource,
    /// Aggregate trajectory (the replica mean for the stochastic oracle).
    pub mean: Trajectory,
    /// Individual replicas; empty for the binned oracle.
    pub replicas: Vec<Trajectory>,
    pub k1: Option<usize>,
    pub k2: Option<usize>,
    pub n_agents: Option<usize>,
}
