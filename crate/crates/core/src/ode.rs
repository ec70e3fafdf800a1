//! Adaptive Dormand–Prince 5(4) integrator with continuous output.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

// fifth-order solution minus embedded fourth-order solution
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: f64::INFINITY,
            max_steps: 5_000_000,
        }
    }
}

/// States sampled at the requested output times (and, optionally, at every
/// accepted step), in increasing time order.
#[derive(Debug, Clone, Default)]
pub struct Solution {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub evaluations: usize,
}

impl Dopri5 {
    pub fn new(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn with_max_step(mut self, max_step: f64) -> Self {
        self.max_step = max_step;
        self
    }

    /// Integrates `y' = f(t, y)` from `t0` to the last entry of `outputs`.
    ///
    /// `outputs` must be nondecreasing and start at or after `t0`.
    pub fn solve<F>(&self, rhs: F, t0: f64, y0: &[f64], outputs: &[f64], record_steps: bool) -> Result<Solution>
    where
        F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    {
        self.solve_observed(rhs, t0, y0, outputs, record_steps, |_, _| Ok(()))
    }

    /// As [`solve`](Self::solve), calling `observe` after every accepted step.
    pub fn solve_observed<F, O>(
        &self,
        mut rhs: F,
        t0: f64,
        y0: &[f64],
        outputs: &[f64],
        record_steps: bool,
        mut observe: O,
    ) -> Result<Solution>
    where
        F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
        O: FnMut(f64, &[f64]) -> Result<()>,
    {
        let n = y0.len();
        let mut sol = Solution::default();
        if outputs.is_empty() {
            return Ok(sol);
        }
        if outputs.windows(2).any(|w| w[1] < w[0]) || outputs[0] < t0 {
            return Err(Error::InvalidParameter(
                "output times must be sorted and not precede the initial time".into(),
            ));
        }
        let t_end = *outputs.last().unwrap();
        let mut next_out = 0;
        while next_out < outputs.len() && outputs[next_out] == t0 {
            sol.times.push(t0);
            sol.states.push(y0.to_vec());
            next_out += 1;
        }
        if next_out == outputs.len() {
            return Ok(sol);
        }

        let mut t = t0;
        let mut y = y0.to_vec();
        let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
        let mut stage = vec![0.0; n];
        let mut y_new = vec![0.0; n];
        let mut cont: Vec<Vec<f64>> = vec![vec![0.0; n]; 5];

        rhs(t, &y, &mut k[0])?;
        sol.evaluations += 1;
        let mut h = self.initial_step(&mut rhs, t, &y, &k[0], t_end - t, &mut sol)?;
        let mut last_rejected = false;

        while t < t_end {
            if sol.accepted_steps + sol.rejected_steps >= self.max_steps {
                return Err(Error::TooManySteps(self.max_steps));
            }
            let remaining = t_end - t;
            let mut final_step = false;
            if h >= remaining {
                h = remaining;
                final_step = true;
            }
            if h <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t, h });
            }

            for s in 1..7 {
                for i in 0..n {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    stage[i] = y[i] + h * acc;
                }
                rhs(t + C[s] * h, &stage, &mut k[s])?;
            }
            sol.evaluations += 6;
            // the seventh-stage argument is the fifth-order solution
            y_new.copy_from_slice(&stage);

            let mut err_sq = 0.0;
            for i in 0..n {
                let mut e = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    e += E[j] * kj[i];
                }
                let scale = self.abs_tol + self.rel_tol * y[i].abs().max(y_new[i].abs());
                let r = h * e / scale;
                err_sq += r * r;
            }
            let err = (err_sq / n.max(1) as f64).sqrt();
            if !err.is_finite() {
                if y_new.iter().any(|v| !v.is_finite()) && h < 1e-10 {
                    return Err(Error::NonFinite(t));
                }
                h *= MIN_FACTOR;
                sol.rejected_steps += 1;
                last_rejected = true;
                continue;
            }

            if err <= 1.0 {
                for i in 0..n {
                    let diff = y_new[i] - y[i];
                    let bspl = h * k[0][i] - diff;
                    cont[0][i] = y[i];
                    cont[1][i] = diff;
                    cont[2][i] = bspl;
                    cont[3][i] = diff - h * k[6][i] - bspl;
                    let mut d = 0.0;
                    for (j, kj) in k.iter().enumerate() {
                        d += D[j] * kj[i];
                    }
                    cont[4][i] = h * d;
                }
                let t_new = if final_step { t_end } else { t + h };
                while next_out < outputs.len() && outputs[next_out] <= t_new {
                    let to = outputs[next_out];
                    if record_steps && sol.times.last().is_some_and(|&last| last == to) {
                        next_out += 1;
                        continue;
                    }
                    let state = if to == t_new {
                        y_new.clone()
                    } else {
                        let theta = (to - t) / h;
                        let theta1 = 1.0 - theta;
                        (0..n)
                            .map(|i| {
                                cont[0][i]
                                    + theta
                                        * (cont[1][i]
                                            + theta1
                                                * (cont[2][i]
                                                    + theta * (cont[3][i] + theta1 * cont[4][i])))
                            })
                            .collect()
                    };
                    sol.times.push(to);
                    sol.states.push(state);
                    next_out += 1;
                }
                if record_steps && sol.times.last() != Some(&t_new) {
                    sol.times.push(t_new);
                    sol.states.push(y_new.clone());
                }

                t = t_new;
                y.copy_from_slice(&y_new);
                k.swap(0, 6);
                sol.accepted_steps += 1;
                observe(t, &y)?;

                let mut factor = (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR);
                if last_rejected {
                    factor = factor.min(1.0);
                }
                last_rejected = false;
                h = (h * factor).min(self.max_step);
            } else {
                let factor = (SAFETY * err.powf(-0.2)).max(MIN_FACTOR);
                h *= factor;
                sol.rejected_steps += 1;
                last_rejected = true;
            }
        }
        Ok(sol)
    }

    fn initial_step<F>(&self, rhs: &mut F, t: f64, y: &[f64], f0: &[f64], span: f64, sol: &mut Solution) -> Result<f64>
    where
        F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    {
        let n = y.len().max(1) as f64;
        let scale: Vec<f64> = y.iter().map(|v| self.abs_tol + self.rel_tol * v.abs()).collect();
        let norm = |v: &[f64]| -> f64 {
            (v.iter().zip(&scale).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / n).sqrt()
        };
        let d0 = norm(y);
        let d1 = norm(f0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span).min(self.max_step);
        let y1: Vec<f64> = y.iter().zip(f0).map(|(a, b)| a + h0 * b).collect();
        let mut f1 = vec![0.0; y.len()];
        rhs(t + h0, &y1, &mut f1)?;
        sol.evaluations += 1;
        let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
        let d2 = norm(&diff) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        Ok((100.0 * h0).min(h1).min(span).min(self.max_step))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_at_requested_times() {
        let solver = Dopri5::new(1e-10, 1e-12);
        let outputs: Vec<f64> = (0..=20).map(|k| k as f64 * 0.25).collect();
        let sol = solver
            .solve(|_, y, dy| { dy[0] = -y[0]; Ok(()) }, 0.0, &[1.0], &outputs, false)
            .unwrap();
        assert_eq!(sol.times, outputs);
        for (t, y) in sol.times.iter().zip(&sol.states) {
            assert!((y[0] - (-t).exp()).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn dense_output_is_accurate_between_steps() {
        // harmonic oscillator; few large steps, many interpolated points
        let solver = Dopri5::new(1e-9, 1e-12);
        let outputs: Vec<f64> = (0..=1000).map(|k| k as f64 * 0.01).collect();
        let sol = solver
            .solve(
                |_, y, dy| {
                    dy[0] = y[1];
                    dy[1] = -y[0];
                    Ok(())
                },
                0.0,
                &[0.0, 1.0],
                &outputs,
                false,
            )
            .unwrap();
        assert!(sol.accepted_steps < 400);
        for (t, y) in sol.times.iter().zip(&sol.states) {
            assert!((y[0] - t.sin()).abs() < 1e-7);
        }
    }

    #[test]
    fn records_steps_merged_with_outputs() {
        let solver = Dopri5::new(1e-6, 1e-9);
        let sol = solver
            .solve(|_, y, dy| { dy[0] = y[0]; Ok(()) }, 0.0, &[1.0], &[0.0, 0.5, 1.0], true)
            .unwrap();
        assert!(sol.times.windows(2).all(|w| w[0] < w[1]));
        assert!(sol.times.contains(&0.5));
        assert_eq!(*sol.times.last().unwrap(), 1.0);
    }

    #[test]
    fn linear_invariants_are_preserved() {
        // x' = -xy, y' = xy keeps x + y constant to rounding
        let solver = Dopri5::default();
        let outputs: Vec<f64> = (0..=50).map(|k| k as f64).collect();
        let sol = solver
            .solve(
                |_, y, dy| {
                    dy[0] = -0.01 * y[0] * y[1] + y[1];
                    dy[1] = -dy[0];
                    Ok(())
                },
                0.0,
                &[999.0, 1.0],
                &outputs,
                false,
            )
            .unwrap();
        for y in &sol.states {
            assert!((y[0] + y[1] - 1000.0).abs() < 1e-10);
        }
    }

    #[test]
    fn propagates_rhs_errors() {
        let solver = Dopri5::default();
        let res = solver.solve(
            |t, _, _| {
                if t > 0.5 {
                    Err(Error::NotApplicable("boom".into()))
                } else {
                    Ok(())
                }
            },
            0.0,
            &[1.0],
            &[1.0],
            false,
        );
        assert!(res.is_err());
    }

    #[test]
    fn step_underflow_is_reported() {
        // blows up at t = 1
        let solver = Dopri5::default();
        let res = solver.solve(
            |_, y, dy| {
                dy[0] = y[0] * y[0];
                Ok(())
            },
            0.0,
            &[1.0],
            &[2.0],
            false,
        );
        assert!(matches!(
            res,
            Err(Error::StepSizeUnderflow { .. }) | Err(Error::NonFinite(_)) | Err(Error::TooManySteps(_))
        ));
    }

    #[test]
    fn rejects_unsorted_outputs() {
        let solver = Dopri5::default();
        assert!(solver
            .solve(|_, _, dy| { dy[0] = 0.0; Ok(()) }, 0.0, &[1.0], &[1.0, 0.5], false)
            .is_err());
    }
}
