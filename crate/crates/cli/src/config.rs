//! Scenario files.
//!
//! ```json
//! {
//!   "population": 1000, "gamma": 1, "i0": 1,
//!   "susceptibility": "degenerate(c=0.002)",
//!   "infectivity": "degenerate(c=1)",
//!   "t_end": 40,
//!   "tolerances": { "rel": 1e-8, "abs": 1e-10 },
//!   "output": { "points": 201 }
//! }
//! ```

use std::path::Path;

use hetero_sis::{DistributionSpec, OutputGrid, ScenarioConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_rel")]
    pub rel: f64,
    #[serde(default = "default_abs")]
    pub abs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_step: Option<f64>,
}

fn default_rel() -> f64 {
    1e-8
}

fn default_abs() -> f64 {
    1e-10
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: default_rel(),
            abs: default_abs(),
            max_step: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub population: f64,
    pub gamma: f64,
    pub i0: f64,
    pub susceptibility: DistributionSpec,
    pub infectivity: DistributionSpec,
    pub t_end: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputGrid,
}

impl ConfigFile {
    pub fn scenario(&self) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::new(
            self.population,
            self.i0,
            self.gamma,
            self.susceptibility,
            self.infectivity,
            self.t_end,
        )
        .with_tolerances(self.tolerances.rel, self.tolerances.abs)
        .with_output(self.output.clone());
        cfg.max_step = self.tolerances.max_step;
        cfg
    }
}

/// Parses and validates a scenario document. Every failure is a usage error
/// whose message names the file and the offending line or field.
pub fn parse(text: &str, origin: &str) -> CliResult<(ConfigFile, ScenarioConfig)> {
    let file: ConfigFile =
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("{origin}: {e}")))?;
    if !(file.i0 > 0.0) {
        return Err(CliError::Usage(format!(
            "{origin}: field `i0`: initial infected must be > 0, got {}",
            file.i0
        )));
    }
    let scenario = file.scenario();
    scenario
        .validate()
        .map_err(|e| CliError::Usage(format!("{origin}: {e}")))?;
    Ok((file, scenario))
}

pub fn load(path: &Path) -> CliResult<(ConfigFile, ScenarioConfig)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}
