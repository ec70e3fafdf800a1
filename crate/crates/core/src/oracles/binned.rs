//! Deterministic cohort model over a grid of (susceptibility, infectivity)
//! pairs.
//!
//! Cohort (j, k) has susceptibility b₁(j) and infectivity b₂(k):
//!
//! ```text
//! s'(j,k) = −b₁(j) s(j,k) P + γ i(j,k),   P = Σ b₂(k′) i(j′,k′)
//! i'(j,k) =  b₁(j) s(j,k) P − γ i(j,k)
//! ```

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::reduced_ode::{ScenarioConfig, Trajectory};

use super::{OracleResult, OracleSource};

pub const DEFAULT_BINS: usize = 400;

/// A mass point standing in for one equal-probability slice of a
/// distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub value: f64,
    pub weight: f64,
}

/// Splits `dist` at its `j/k` quantiles and represents each slice by its
/// conditional mean, so the bin mean equals the distribution mean.
///
/// A degenerate distribution gives a single bin. The top Pareto slice is
/// unbounded; its conditional mean is finite for α > 1.
pub fn quantile_bins(dist: &DistributionSpec, k: usize) -> Result<Vec<Bin>> {
    dist.validate()?;
    if k == 0 {
        return Err(Error::InvalidParameter("bin count must be at least 1".into()));
    }
    if let DistributionSpec::Degenerate { c } = *dist {
        return Ok(vec![Bin { value: c, weight: 1.0 }]);
    }
    let edges: Vec<f64> = (0..=k)
        .map(|j| match j {
            0 => 0.0,
            j if j == k => f64::INFINITY,
            j => dist.quantile(j as f64 / k as f64),
        })
        .collect();
    let mut bins = Vec::with_capacity(k);
    for w in edges.windows(2) {
        let weight = dist.cdf(w[1]) - dist.cdf(w[0]);
        let mass = dist.partial_mean(w[0], w[1]);
        if !(weight > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "degenerate slice [{}, {}] of {dist}",
                w[0], w[1]
            )));
        }
        bins.push(Bin {
            value: mass / weight,
            weight,
        });
    }
    let total: f64 = bins.iter().map(|b| b.weight).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!("bin weights of {dist} sum to {total}")));
    }
    Ok(bins)
}

/// Integrates the cohort model on the scenario's output grid with `k1`
/// susceptibility and `k2` infectivity bins.
pub fn integrate_binned(config: &ScenarioConfig, k1: usize, k2: usize) -> Result<OracleResult> {
    integrate_binned_at(config, k1, k2, &config.output.times_for(config.t_end))
}

pub fn integrate_binned_at(config: &ScenarioConfig, k1: usize, k2: usize, times: &[f64]) -> Result<OracleResult> {
    config.validate()?;
    let b1 = quantile_bins(&config.susceptibility, k1)?;
    let b2 = quantile_bins(&config.infectivity, k2)?;
    let (n1, n2) = (b1.len(), b2.len());
    let cells = n1 * n2;
    let gamma = config.gamma;

    // layout: s[cells], i[cells], q1, q2
    let mut y0 = vec![0.0; 2 * cells + 2];
    for (j, bj) in b1.iter().enumerate() {
        for (k, bk) in b2.iter().enumerate() {
            let w = bj.weight * bk.weight;
            y0[j * n2 + k] = config.s0() * w;
            y0[cells + j * n2 + k] = config.i0 * w;
        }
    }
    let beta1: Vec<f64> = b1.iter().map(|b| b.value).collect();
    let beta2: Vec<f64> = b2.iter().map(|b| b.value).collect();

    let pressure = |i: &[f64]| -> f64 {
        let mut p = 0.0;
        for j in 0..n1 {
            for k in 0..n2 {
                p += beta2[k] * i[j * n2 + k];
            }
        }
        p
    };
    let exposure = |s: &[f64]| -> f64 {
        let mut e = 0.0;
        for j in 0..n1 {
            for k in 0..n2 {
                e += beta1[j] * s[j * n2 + k];
            }
        }
        e
    };

    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let (s, rest) = y.split_at(cells);
        let i = &rest[..cells];
        let p = pressure(i);
        for j in 0..n1 {
            for k in 0..n2 {
                let c = j * n2 + k;
                let flow = beta1[j] * s[c] * p - gamma * i[c];
                dy[c] = -flow;
                dy[cells + c] = flow;
            }
        }
        dy[2 * cells] = -p;
        dy[2 * cells + 1] = exposure(s);
        Ok(())
    };

    let floor = -10.0 * config.abs_tol;
    let observe = |t: f64, y: &[f64]| -> Result<()> {
        match y[..2 * cells].iter().copied().find(|&m| m < floor) {
            Some(mass) => Err(Error::NegativeMass { t, mass }),
            None => Ok(()),
        }
    };

    let mut solver = config.solver();
    // per-cohort masses are ~1/cells of the total
    solver.abs_tol = config.abs_tol / cells as f64;
    let sol = solver.solve_observed(rhs, 0.0, &y0, times, false, observe)?;

    let mut mean = Trajectory::with_capacity(sol.times.len());
    for (&t, y) in sol.times.iter().zip(&sol.states) {
        let (s, rest) = y.split_at(cells);
        let i = &rest[..cells];
        if let Some(&mass) = y[..2 * cells].iter().find(|&&m| m < floor) {
            return Err(Error::NegativeMass { t, mass });
        }
        let s_tot: f64 = s.iter().sum();
        let i_tot: f64 = i.iter().sum();
        let b1_eff = if s_tot > 0.0 { exposure(s) / s_tot } else { 0.0 };
        let b2_eff = if i_tot > 0.0 { pressure(i) / i_tot } else { 0.0 };
        mean.push(t, s_tot, i_tot, y[2 * cells], y[2 * cells + 1], b1_eff, b2_eff);
    }
    Ok(OracleResult {
        source: OracleSource::Binned,
        mean,
        replicas: Vec::new(),
        k1: Some(n1),
        k2: Some(n2),
        n_agents: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_preserve_mass_and_mean() {
        for d in [
            DistributionSpec::pareto(0.5, 2.0).unwrap(),
            DistributionSpec::pareto(1.0, 1.3).unwrap(),
            DistributionSpec::gamma(2.0, 0.5).unwrap(),
            DistributionSpec::gamma(0.4, 3.0).unwrap(),
        ] {
            for k in [1, 7, 400] {
                let bins = quantile_bins(&d, k).unwrap();
                assert_eq!(bins.len(), k);
                let w: f64 = bins.iter().map(|b| b.weight).sum();
                let m: f64 = bins.iter().map(|b| b.weight * b.value).sum();
                assert!((w - 1.0).abs() < 1e-12, "{d} k={k}: weight {w}");
                assert!((m - d.mean()).abs() < 1e-10 * d.mean(), "{d} k={k}: mean {m}");
                assert!(bins.windows(2).all(|p| p[0].value < p[1].value));
            }
        }
    }

    #[test]
    fn pareto_bins_have_equal_weights_and_exact_edges() {
        let d = DistributionSpec::pareto(1.0, 2.0).unwrap();
        let bins = quantile_bins(&d, 4).unwrap();
        for b in &bins {
            assert!((b.weight - 0.25).abs() < 1e-15);
        }
        // E[X | X ≤ q(1/4)] = ∫₁^{2/√3} 2x⁻² dx / (1/4)
        let q = 2.0 / 3f64.sqrt();
        assert!((bins[0].value - 8.0 * (1.0 - 1.0 / q)).abs() < 1e-13);
        // top slice [2, ∞): 2·(2/2)/(1/4) = 4
        assert!((bins[3].value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_is_one_bin() {
        let bins = quantile_bins(&DistributionSpec::degenerate(0.3).unwrap(), 50).unwrap();
        assert_eq!(bins, vec![Bin { value: 0.3, weight: 1.0 }]);
    }

    #[test]
    fn zero_bins_rejected() {
        assert!(quantile_bins(&DistributionSpec::gamma(1.0, 1.0).unwrap(), 0).is_err());
    }

    #[test]
    fn single_cohort_matches_homogeneous_logistic() {
        let d = |c| DistributionSpec::degenerate(c).unwrap();
        let cfg = ScenarioConfig::new(1000.0, 1.0, 1.0, d(0.002), d(1.0), 40.0);
        let res = integrate_binned(&cfg, 1, 1).unwrap();
        assert_eq!(res.k1, Some(1));
        assert!((res.mean.final_i() - 500.0).abs() < 0.5);
    }

    #[test]
    fn mass_is_conserved() {
        let cfg = ScenarioConfig::new(
            10.0,
            0.1,
            1.0,
            DistributionSpec::pareto(0.5, 2.0).unwrap(),
            DistributionSpec::gamma(2.0, 0.001).unwrap(),
            20.0,
        );
        let res = integrate_binned(&cfg, 40, 5).unwrap();
        for k in 0..res.mean.len() {
            assert!((res.mean.s[k] + res.mean.i[k] - 10.0).abs() <= 10.0 * cfg.abs_tol);
        }
    }
}
