//! Discrepancy between a reduced trajectory and an oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reduced_ode::Trajectory;

use super::OracleResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointError {
    pub t: f64,
    pub abs_s: f64,
    pub abs_i: f64,
    pub rel_s: f64,
    pub rel_i: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub sup_abs_s: f64,
    pub sup_abs_i: f64,
    /// Sup of |a − b| / max(|a|, |b|, 10⁻¹²N).
    pub sup_rel_s: f64,
    pub sup_rel_i: f64,
    /// Sup of |a − b| / N over S and I.
    pub sup_normalized: f64,
    pub points: Vec<PointError>,
}

impl CompareReport {
    pub fn sup_rel(&self) -> f64 {
        self.sup_rel_s.max(self.sup_rel_i)
    }

    /// Restricts the report to `t ∈ [lo, hi]`.
    pub fn window(&self, lo: f64, hi: f64, population: f64) -> CompareReport {
        let points: Vec<PointError> = self.points.iter().filter(|p| p.t >= lo && p.t <= hi).cloned().collect();
        summarize(points, population)
    }
}

fn summarize(points: Vec<PointError>, population: f64) -> CompareReport {
    let sup = |f: &dyn Fn(&PointError) -> f64| points.iter().map(f).fold(0.0f64, f64::max);
    CompareReport {
        sup_abs_s: sup(&|p| p.abs_s),
        sup_abs_i: sup(&|p| p.abs_i),
        sup_rel_s: sup(&|p| p.rel_s),
        sup_rel_i: sup(&|p| p.rel_i),
        sup_normalized: sup(&|p| p.abs_s.max(p.abs_i)) / population,
        points,
    }
}

/// Pointwise comparison of S and I on a common grid. Large discrepancies
/// are reported, never raised.
pub fn compare(traj: &Trajectory, oracle: &OracleResult) -> Result<CompareReport> {
    compare_trajectories(traj, &oracle.mean)
}

pub fn compare_trajectories(a: &Trajectory, b: &Trajectory) -> Result<CompareReport> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::GridMismatch(format!("{} vs {} output times", a.len(), b.len())));
    }
    for (x, y) in a.times.iter().zip(&b.times) {
        if (x - y).abs() > 1e-12 * x.abs().max(1.0) {
            return Err(Error::GridMismatch(format!("time {x} vs {y}")));
        }
    }
    let population = a.s[0] + a.i[0];
    let floor = 1e-12 * population;
    let rel = |x: f64, y: f64| {
        let d = (x - y).abs();
        if d == 0.0 {
            0.0
        } else {
            d / x.abs().max(y.abs()).max(floor)
        }
    };
    let points = (0..a.len())
        .map(|k| PointError {
            t: a.times[k],
            abs_s: (a.s[k] - b.s[k]).abs(),
            abs_i: (a.i[k] - b.i[k]).abs(),
            rel_s: rel(a.s[k], b.s[k]),
            rel_i: rel(a.i[k], b.i[k]),
        })
        .collect();
    Ok(summarize(points, population))
}

/// Least-squares fit of `err ≈ c·t^p` on log-log axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub points: usize,
}

/// Fits over the pairs with positive `t` and `err`; needs at least two.
pub fn fit_power_law(t: &[f64], err: &[f64]) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(err)
        .filter(|(&t, &e)| t > 0.0 && e > 0.0 && e.is_finite())
        .map(|(&t, &e)| (t.ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "power-law fit needs two positive points, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("power-law fit needs distinct times".into()));
    }
    let exponent = sxy / sxx;
    Ok(PowerLawFit {
        exponent,
        coefficient: (my - exponent * mx).exp(),
        points: pts.len(),
    })
}
