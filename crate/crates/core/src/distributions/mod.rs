//! Transmission-parameter distributions and their moment generating
//! functions on the tilt half-line.
//!
//! The reduced model only ever needs a distribution through its log-MGF
//! derivative `H(λ) = d/dλ ln M(λ)`, the mean of the distribution after
//! exponential tilting by `e^{λx}`. Susceptibility is tilted with λ ≤ 0,
//! infectivity with λ ≥ 0.

mod incomplete_gamma;

pub use incomplete_gamma::{
    ln_upper_incomplete_gamma, regularized_lower_gamma, regularized_upper_gamma,
    scaled_upper_incomplete_gamma, upper_incomplete_gamma,
};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A distribution of an individual transmission parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum DistributionSpec {
    /// Support `[xi, ∞)`, density `α ξ^α / x^(α+1)`.
    Pareto { xi: f64, alpha: f64 },
    /// Point mass at `c` (homogeneous population).
    Degenerate { c: f64 },
    /// Shape `k`, scale `θ`.
    Gamma { shape: f64, scale: f64 },
}

/// The set of tilts λ for which the MGF is finite: `(-∞, upper]` when
/// `closed`, `(-∞, upper)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltDomain {
    pub upper: f64,
    pub closed: bool,
}

impl TiltDomain {
    pub fn contains(&self, lambda: f64) -> bool {
        if lambda.is_nan() {
            return false;
        }
        if self.closed {
            lambda <= self.upper
        } else {
            lambda < self.upper
        }
    }

    /// Whether the domain extends past zero, i.e. the distribution can be
    /// used for infectivity, whose tilt grows from zero.
    pub fn admits_positive_tilts(&self) -> bool {
        self.upper > 0.0
    }
}

/// The two limits of H on the nonpositive half-line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HLimits {
    /// H(0⁻), the mean of the untilted distribution.
    pub mean_at_zero: f64,
    /// lim H(λ) as λ → -∞: the bottom of the support.
    pub chi: f64,
}

impl DistributionSpec {
    pub fn pareto(xi: f64, alpha: f64) -> Result<Self> {
        let d = DistributionSpec::Pareto { xi, alpha };
        d.validate()?;
        Ok(d)
    }

    pub fn degenerate(c: f64) -> Result<Self> {
        let d = DistributionSpec::Degenerate { c };
        d.validate()?;
        Ok(d)
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        let d = DistributionSpec::Gamma { shape, scale };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            DistributionSpec::Pareto { xi, alpha } => {
                if !(xi.is_finite() && xi > 0.0) {
                    return bad(format!("pareto xi must be positive, got {xi}"));
                }
                if !(alpha.is_finite() && alpha > 1.0) {
                    return bad(format!(
                        "pareto alpha must exceed 1 (finite mean), got {alpha}"
                    ));
                }
            }
            DistributionSpec::Degenerate { c } => {
                if !(c.is_finite() && c >= 0.0) {
                    return bad(format!("degenerate c must be nonnegative, got {c}"));
                }
            }
            DistributionSpec::Gamma { shape, scale } => {
                if !(shape.is_finite() && shape > 0.0) {
                    return bad(format!("gamma shape must be positive, got {shape}"));
                }
                if !(scale.is_finite() && scale > 0.0) {
                    return bad(format!("gamma scale must be positive, got {scale}"));
                }
            }
        }
        Ok(())
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, DistributionSpec::Degenerate { .. })
    }

    pub fn domain(&self) -> TiltDomain {
        match *self {
            DistributionSpec::Pareto { .. } => TiltDomain {
                upper: 0.0,
                closed: true,
            },
            DistributionSpec::Degenerate { .. } => TiltDomain {
                upper: f64::INFINITY,
                closed: false,
            },
            DistributionSpec::Gamma { scale, .. } => TiltDomain {
                upper: 1.0 / scale,
                closed: false,
            },
        }
    }

    fn check_domain(&self, lambda: f64) -> Result<()> {
        if self.domain().contains(lambda) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                lambda,
                distribution: self.to_string(),
            })
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            DistributionSpec::Pareto { xi, alpha } => xi * alpha / (alpha - 1.0),
            DistributionSpec::Degenerate { c } => c,
            DistributionSpec::Gamma { shape, scale } => shape * scale,
        }
    }

    /// Variance of the untilted distribution; infinite for Pareto with α ≤ 2.
    pub fn variance(&self) -> f64 {
        match *self {
            DistributionSpec::Pareto { xi, alpha } => {
                if alpha > 2.0 {
                    xi * xi * alpha / ((alpha - 1.0).powi(2) * (alpha - 2.0))
                } else {
                    f64::INFINITY
                }
            }
            DistributionSpec::Degenerate { .. } => 0.0,
            DistributionSpec::Gamma { shape, scale } => shape * scale * scale,
        }
    }

    /// M(λ) = E[e^{λX}].
    pub fn mgf(&self, lambda: f64) -> Result<f64> {
        if lambda == 0.0 {
            self.check_domain(lambda)?;
            return Ok(1.0);
        }
        Ok(self.ln_mgf(lambda)?.exp())
    }

    /// ln M(λ); finite even where M(λ) underflows (Pareto at large -λ).
    pub fn ln_mgf(&self, lambda: f64) -> Result<f64> {
        self.check_domain(lambda)?;
        if lambda == 0.0 {
            return Ok(0.0);
        }
        match *self {
            DistributionSpec::Pareto { xi, alpha } => {
                // M = α x^α Γ(-α, x) = α e^{-x} G(-α, x), x = -ξλ
                let x = -xi * lambda;
                let g = scaled_upper_incomplete_gamma(-alpha, x)?;
                Ok(alpha.ln() - x + g.ln())
            }
            DistributionSpec::Degenerate { c } => Ok(c * lambda),
            DistributionSpec::Gamma { shape, scale } => Ok(-shape * (-scale * lambda).ln_1p()),
        }
    }

    /// H(λ) = d/dλ ln M(λ), the mean of the λ-tilted distribution.
    ///
    /// At λ = 0 the stored mean is returned (the Pareto closed form has a
    /// removable singularity there).
    pub fn h(&self, lambda: f64) -> Result<f64> {
        self.check_domain(lambda)?;
        if lambda == 0.0 {
            return Ok(self.mean());
        }
        match *self {
            DistributionSpec::Pareto { xi, alpha } => {
                // H = Γ(1-α, x) / (|λ| Γ(-α, x)) = ξ G(1-α, x) / G(-α, x)
                let x = -xi * lambda;
                let upper = scaled_upper_incomplete_gamma(1.0 - alpha, x)?;
                let lower = scaled_upper_incomplete_gamma(-alpha, x)?;
                Ok(xi * upper / lower)
            }
            DistributionSpec::Degenerate { c } => Ok(c),
            DistributionSpec::Gamma { shape, scale } => Ok(shape * scale / (1.0 - scale * lambda)),
        }
    }

    pub fn h_limits(&self) -> HLimits {
        let chi = match *self {
            DistributionSpec::Pareto { xi, .. } => xi,
            DistributionSpec::Degenerate { c } => c,
            DistributionSpec::Gamma { .. } => 0.0,
        };
        HLimits {
            mean_at_zero: self.mean(),
            chi,
        }
    }

    /// H'(λ), the variance of the λ-tilted distribution.
    pub fn variance_at(&self, lambda: f64) -> Result<f64> {
        self.check_domain(lambda)?;
        if lambda == 0.0 {
            return Ok(self.variance());
        }
        match *self {
            DistributionSpec::Pareto { xi, alpha } => {
                // E_λ[X²] = ξ² G(2-α, x) / G(-α, x)
                let x = -xi * lambda;
                let g0 = scaled_upper_incomplete_gamma(-alpha, x)?;
                let g1 = scaled_upper_incomplete_gamma(1.0 - alpha, x)?;
                let g2 = scaled_upper_incomplete_gamma(2.0 - alpha, x)?;
                let r1 = g1 / g0;
                Ok((xi * xi * (g2 / g0 - r1 * r1)).max(0.0))
            }
            DistributionSpec::Degenerate { .. } => Ok(0.0),
            DistributionSpec::Gamma { shape, scale } => {
                let d = 1.0 - scale * lambda;
                Ok(shape * scale * scale / (d * d))
            }
        }
    }

    /// `n` independent draws from a generator seeded with `seed`.
    pub fn sample(&self, seed: u64, n: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng, n)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        match *self {
            DistributionSpec::Pareto { xi, alpha } => (0..n)
                .map(|_| {
                    // 1 - u lies in (0, 1]
                    let u: f64 = 1.0 - rng.gen::<f64>();
                    xi * u.powf(-1.0 / alpha)
                })
                .collect(),
            DistributionSpec::Degenerate { c } => vec![c; n],
            DistributionSpec::Gamma { shape, scale } => {
                let dist = rand_distr::Gamma::new(shape, scale)
                    .expect("validated gamma parameters");
                (0..n).map(|_| rng.sample(dist)).collect()
            }
        }
    }

    /// P(X ≤ x).
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Pareto { xi, alpha } => {
                if x <= xi {
                    0.0
                } else {
                    -(alpha * (xi / x).ln()).exp_m1()
                }
            }
            DistributionSpec::Degenerate { c } => {
                if x >= c {
                    1.0
                } else {
                    0.0
                }
            }
            DistributionSpec::Gamma { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else if x.is_infinite() {
                    1.0
                } else {
                    regularized_lower_gamma(shape, x / scale).unwrap_or(f64::NAN)
                }
            }
        }
    }

    /// E[X; lo < X ≤ hi].
    pub fn partial_mean(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            DistributionSpec::Pareto { xi, alpha } => {
                let tail = |t: f64| {
                    if t.is_infinite() {
                        0.0
                    } else {
                        let t = t.max(xi);
                        alpha * xi.powf(alpha) * t.powf(1.0 - alpha) / (alpha - 1.0)
                    }
                };
                tail(lo) - tail(hi)
            }
            DistributionSpec::Degenerate { c } => {
                if lo < c && c <= hi {
                    c
                } else {
                    0.0
                }
            }
            DistributionSpec::Gamma { shape, scale } => {
                let p = |t: f64| {
                    if t <= 0.0 {
                        0.0
                    } else if t.is_infinite() {
                        1.0
                    } else {
                        regularized_lower_gamma(shape + 1.0, t / scale).unwrap_or(f64::NAN)
                    }
                };
                shape * scale * (p(hi) - p(lo))
            }
        }
    }

    /// Smallest x with P(X ≤ x) ≥ p, for p in [0, 1].
    pub fn quantile(&self, p: f64) -> f64 {
        match *self {
            DistributionSpec::Pareto { xi, alpha } => {
                if p >= 1.0 {
                    f64::INFINITY
                } else {
                    xi * (1.0 - p).powf(-1.0 / alpha)
                }
            }
            DistributionSpec::Degenerate { c } => c,
            DistributionSpec::Gamma { shape, scale } => {
                if p <= 0.0 {
                    return 0.0;
                }
                if p >= 1.0 {
                    return f64::INFINITY;
                }
                let mut hi = shape.max(1.0);
                while regularized_lower_gamma(shape, hi).unwrap_or(1.0) < p {
                    hi *= 2.0;
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if regularized_lower_gamma(shape, mid).unwrap_or(1.0) < p {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi * scale
            }
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DistributionSpec::Pareto { xi, alpha } => write!(f, "pareto(xi={xi}, alpha={alpha})"),
            DistributionSpec::Degenerate { c } => write!(f, "degenerate(c={c})"),
            DistributionSpec::Gamma { shape, scale } => {
                write!(f, "gamma(k={shape}, theta={scale})")
            }
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Parses `pareto(xi=1.0, alpha=2.0)`, `degenerate(c=0.5)`,
    /// `gamma(k=2.0, theta=0.5)`; case-insensitive, whitespace-tolerant.
    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        let open = compact.find('(').ok_or_else(|| fail("expected `name(...)`"))?;
        if !compact.ends_with(')') {
            return Err(fail("missing closing parenthesis"));
        }
        let name = &compact[..open];
        let body = &compact[open + 1..compact.len() - 1];

        let mut params: Vec<(&str, f64)> = Vec::new();
        if !body.is_empty() {
            for item in body.split(',') {
                let (key, value) = item
                    .split_once('=')
                    .ok_or_else(|| fail(&format!("expected key=value, got `{item}`")))?;
                let value: f64 = value
                    .parse()
                    .map_err(|_| fail(&format!("`{value}` is not a number")))?;
                if params.iter().any(|(k, _)| *k == key) {
                    return Err(fail(&format!("duplicate parameter `{key}`")));
                }
                params.push((key, value));
            }
        }

        let mut take = |keys: &[&str]| -> Result<f64> {
            let pos = params
                .iter()
                .position(|(k, _)| keys.contains(k))
                .ok_or_else(|| fail(&format!("missing parameter `{}`", keys[0])))?;
            Ok(params.remove(pos).1)
        };

        let spec = match name {
            "pareto" => {
                let xi = take(&["xi"])?;
                let alpha = take(&["alpha"])?;
                DistributionSpec::Pareto { xi, alpha }
            }
            "degenerate" => DistributionSpec::Degenerate { c: take(&["c"])? },
            "gamma" => {
                let shape = take(&["k", "shape"])?;
                let scale = take(&["theta", "scale"])?;
                DistributionSpec::Gamma { shape, scale }
            }
            other => return Err(fail(&format!("unknown distribution `{other}`"))),
        };
        if let Some((key, _)) = params.first() {
            return Err(fail(&format!("unexpected parameter `{key}`")));
        }
        spec.validate().map_err(|e| fail(&e.to_string()))?;
        Ok(spec)
    }
}

impl From<DistributionSpec> for String {
    fn from(d: DistributionSpec) -> String {
        d.to_string()
    }
}

impl TryFrom<String> for DistributionSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    /// Composite Gauss-Legendre (5 points per panel) on a log-spaced grid;
    /// independent of the incomplete gamma routines.
    fn pareto_mgf_by_quadrature(xi: f64, alpha: f64, lambda: f64) -> f64 {
        let nodes = [
            0.0,
            -0.538_469_310_105_683,
            0.538_469_310_105_683,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        let weights = [
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
            0.236_926_885_056_189,
        ];
        // substitute t = ξ e^u, u in [0, 60]
        let panels = 6000;
        let width = 60.0 / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * width;
            for (n, w) in nodes.iter().zip(weights) {
                let u = mid + 0.5 * width * n;
                let t = xi * u.exp();
                let density = alpha * xi.powf(alpha) * t.powf(-alpha - 1.0);
                total += w * 0.5 * width * density * (lambda * t).exp() * t;
            }
        }
        total
    }

    #[test]
    fn mgf_examples() {
        let d = DistributionSpec::degenerate(0.5).unwrap();
        assert!(rel(d.mgf(-2.0).unwrap(), (-1.0f64).exp()) < 1e-15);

        let p = DistributionSpec::pareto(1.0, 2.0).unwrap();
        assert_eq!(p.mgf(0.0).unwrap(), 1.0);

        // 2 Γ(-2, 1)
        let expected = 0.219_383_934_395_520_27;
        let got = p.mgf(-1.0).unwrap();
        assert!(rel(got, expected) < 1e-13);
        assert!(rel(got, pareto_mgf_by_quadrature(1.0, 2.0, -1.0)) < 1e-9);
    }

    #[test]
    fn mgf_is_one_at_zero_for_every_variant() {
        for d in [
            DistributionSpec::pareto(0.3, 1.2).unwrap(),
            DistributionSpec::degenerate(4.0).unwrap(),
            DistributionSpec::gamma(0.5, 3.0).unwrap(),
        ] {
            assert_eq!(d.mgf(0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn mgf_rejects_lambdas_outside_domain() {
        let p = DistributionSpec::pareto(1.0, 2.0).unwrap();
        assert!(matches!(p.mgf(0.1), Err(Error::OutsideDomain { .. })));
        let g = DistributionSpec::gamma(2.0, 0.5).unwrap();
        assert!(g.mgf(1.99).is_ok());
        assert!(g.mgf(2.0).is_err());
        assert!(DistributionSpec::degenerate(1.0).unwrap().mgf(50.0).is_ok());
    }

    #[test]
    fn h_examples() {
        let p = DistributionSpec::pareto(1.0, 2.0).unwrap();
        assert_eq!(p.h(0.0).unwrap(), 2.0);
        // tilted mean at λ = -1 from arbitrary-precision evaluation
        assert!(rel(p.h(-1.0).unwrap(), 1.353_750_056_357_401_7) < 1e-12);

        let p = DistributionSpec::pareto(1.5, 3.0).unwrap();
        assert!((p.h(-1e6).unwrap() - 1.5).abs() < 1e-6);

        let d = DistributionSpec::degenerate(0.7).unwrap();
        for l in [-100.0, -1.0, 0.0, 3.0] {
            assert_eq!(d.h(l).unwrap(), 0.7);
        }
    }

    #[test]
    fn h_approaches_mean_from_below() {
        let p = DistributionSpec::pareto(1.0, 3.0).unwrap();
        let mean = p.mean();
        let mut last = 0.0;
        for k in 1..10 {
            let h = p.h(-(10f64).powi(-k)).unwrap();
            assert!(h < mean && h > last);
            last = h;
        }
        assert!(rel(last, mean) < 1e-8);
    }

    #[test]
    fn h_limits_examples() {
        let p = DistributionSpec::pareto(0.5, 2.0).unwrap();
        assert_eq!(p.h_limits(), HLimits { mean_at_zero: 1.0, chi: 0.5 });
        let d = DistributionSpec::degenerate(0.3).unwrap();
        assert_eq!(d.h_limits(), HLimits { mean_at_zero: 0.3, chi: 0.3 });
        let g = DistributionSpec::gamma(2.0, 0.5).unwrap();
        let limits = g.h_limits();
        assert_eq!(limits.mean_at_zero, 1.0);
        assert_eq!(limits.chi, 0.0);
        assert!(g.h(-1e9).unwrap() < 1e-8);
    }

    #[test]
    fn variance_examples() {
        let d = DistributionSpec::degenerate(3.0).unwrap();
        assert_eq!(d.variance_at(-5.0).unwrap(), 0.0);

        let p = DistributionSpec::pareto(1.0, 3.0).unwrap();
        assert!(rel(p.variance_at(0.0).unwrap(), 0.75) < 1e-15);
        // continuity from the left
        assert!(rel(p.variance_at(-1e-7).unwrap(), 0.75) < 1e-2);

        let g = DistributionSpec::gamma(2.0, 1.0).unwrap();
        assert!(rel(g.variance_at(-1.0).unwrap(), 0.5) < 1e-15);

        assert_eq!(DistributionSpec::pareto(1.0, 2.0).unwrap().variance_at(0.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn pareto_variance_matches_derivative_of_h() {
        let p = DistributionSpec::pareto(0.8, 2.5).unwrap();
        for &l in &[-0.05f64, -0.7, -3.0, -40.0] {
            let step = 1e-6 * l.abs();
            let fd = (p.h(l + step).unwrap() - p.h(l - step).unwrap()) / (2.0 * step);
            assert!(rel(p.variance_at(l).unwrap(), fd) < 1e-5, "lambda {l}");
        }
    }

    #[test]
    fn sampling_examples() {
        let d = DistributionSpec::degenerate(2.0).unwrap();
        assert_eq!(d.sample(99, 3), vec![2.0, 2.0, 2.0]);

        let p = DistributionSpec::pareto(1.0, 2.0).unwrap();
        let xs = p.sample(7, 1_000_000);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(rel(mean, 2.0) < 0.01, "sample mean {mean}");
        assert!(xs.iter().all(|&x| x >= 1.0));
        assert_eq!(xs[..10], p.sample(7, 10)[..]);

        let g = DistributionSpec::gamma(2.0, 0.5).unwrap();
        let ys = g.sample(3, 200_000);
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        assert!(rel(mean, 1.0) < 0.01);
    }

    #[test]
    fn quantiles_invert_cdf() {
        for d in [
            DistributionSpec::pareto(0.5, 2.0).unwrap(),
            DistributionSpec::gamma(2.0, 0.5).unwrap(),
            DistributionSpec::gamma(0.3, 4.0).unwrap(),
        ] {
            for &p in &[1e-6, 0.01, 0.3, 0.5, 0.9, 0.999] {
                let x = d.quantile(p);
                assert!((d.cdf(x) - p).abs() < 1e-12 * p.max(1e-3), "{d} p={p}");
            }
        }
    }

    #[test]
    fn partial_means_add_up_to_mean() {
        for d in [
            DistributionSpec::pareto(0.5, 2.0).unwrap(),
            DistributionSpec::gamma(2.0, 0.5).unwrap(),
        ] {
            let cut = d.quantile(0.4);
            let total = d.partial_mean(0.0, cut) + d.partial_mean(cut, f64::INFINITY);
            assert!(rel(total, d.mean()) < 1e-12);
        }
    }

    #[test]
    fn text_form_round_trips() {
        for text in ["pareto(xi=1, alpha=2)", "degenerate(c=0.5)", "gamma(k=2, theta=0.5)"] {
            let d: DistributionSpec = text.parse().unwrap();
            assert_eq!(d.to_string(), text);
        }
        let d: DistributionSpec = "  PARETO ( Xi = 1.0 ,alpha= 2.0 ) ".parse().unwrap();
        assert_eq!(d, DistributionSpec::Pareto { xi: 1.0, alpha: 2.0 });
        let g: DistributionSpec = "gamma(shape=2, scale=0.5)".parse().unwrap();
        assert_eq!(g, DistributionSpec::Gamma { shape: 2.0, scale: 0.5 });
    }

    #[test]
    fn text_form_rejects_malformed_input() {
        for bad in [
            "pareto(xi=1)",
            "pareto(xi=1, alpha=0.9)",
            "pareto xi=1",
            "weibull(k=1)",
            "degenerate(c=abc)",
            "degenerate(c=1, c=2)",
            "gamma(k=1, theta=1, extra=2)",
            "degenerate(c=-1)",
        ] {
            assert!(bad.parse::<DistributionSpec>().is_err(), "{bad}");
        }
    }
}
