//! Run bookkeeping written next to the outputs of every command.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::config::ConfigFile;
use crate::error::CliResult;

#[derive(Debug, Serialize)]
pub struct Step {
    pub name: String,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ConfigFile>,
    pub seeds: Vec<u64>,
    pub steps: Vec<Step>,
    pub outputs: Vec<PathBuf>,
    pub total_seconds: f64,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunManifest {
    pub fn start(scenario: Option<ConfigFile>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: std::env::args().collect(),
            scenario,
            seeds: Vec::new(),
            steps: Vec::new(),
            outputs: Vec::new(),
            total_seconds: 0.0,
            started: Some(Instant::now()),
        }
    }

    /// Runs `f`, recording its wall-clock time under `name`.
    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.steps.push(Step {
            name: name.to_string(),
            seconds: t0.elapsed().as_secs_f64(),
        });
        log::info!("{name}: {:.3} s", t0.elapsed().as_secs_f64());
        out
    }

    /// Writes `contents` to `dir/name` and records the path.
    pub fn write(&mut self, dir: &Path, name: &str, contents: &[u8]) -> CliResult<PathBuf> {
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        log::debug!("wrote {}", path.display());
        self.outputs.push(path.clone());
        Ok(path)
    }

    /// Writes the SVG, downgrading any failure to a warning.
    pub fn write_plot(&mut self, dir: &Path, name: &str, svg: Result<String, String>) {
        match svg {
            Ok(svg) => {
                if let Err(e) = self.write(dir, name, svg.as_bytes()) {
                    log::warn!("plot {name} not written: {e}");
                }
            }
            Err(e) => log::warn!("plot {name} not rendered: {e}"),
        }
    }

    /// Writes `manifest.json`; must be the last output of a run.
    pub fn finish(mut self, dir: &Path) -> CliResult<()> {
        self.total_seconds = self.started.map_or(0.0, |s| s.elapsed().as_secs_f64());
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&self)?;
        std::fs::write(&path, text + "\n")?;
        Ok(())
    }
}
