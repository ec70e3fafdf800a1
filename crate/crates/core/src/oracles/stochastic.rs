//! Exact event-driven simulation of the agent-level SIS process.
//!
//! Each of `n` agents represents mass `m = N/n`. A susceptible agent j is
//! infected at rate `m·β₁ⱼ·Σ_{k infected} β₂ₖ`; an infected agent recovers at
//! rate γ. With this scaling the mass-action limit is the cohort model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::reduced_ode::{ScenarioConfig, Trajectory};

use super::{OracleResult, OracleSource};

/// Binary indexed tree over nonnegative weights with prefix search.
#[derive(Debug, Clone)]
pub struct Fenwick {
    tree: Vec<f64>,
}

impl Fenwick {
    pub fn new(n: usize) -> Self {
        Self { tree: vec![0.0; n + 1] }
    }

    pub fn from_weights(weights: &[f64]) -> Self {
        let n = weights.len();
        let mut tree = vec![0.0; n + 1];
        tree[1..].copy_from_slice(weights);
        for i in 1..=n {
            let parent = i + (i & i.wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i];
            }
        }
        Self { tree }
    }

    pub fn len(&self) -> usize {
        self.tree.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn add(&mut self, index: usize, delta: f64) {
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of the first `count` weights.
    pub fn prefix(&self, count: usize) -> f64 {
        let mut i = count;
        let mut acc = 0.0;
        while i > 0 {
            acc += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        acc
    }

    pub fn total(&self) -> f64 {
        self.prefix(self.len())
    }

    /// Smallest index whose inclusive prefix sum exceeds `target`.
    pub fn search(&self, mut target: f64) -> usize {
        let n = self.len();
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos.min(n - 1)
    }
}

struct Replica {
    beta1: Vec<f64>,
    beta2: Vec<f64>,
    infected: Vec<bool>,
    infected_list: Vec<usize>,
    susceptibility: Fenwick,
    pressure: f64,
}

impl Replica {
    fn new(beta1: Vec<f64>, beta2: Vec<f64>, initially_infected: usize) -> Self {
        let n = beta1.len();
        let infected: Vec<bool> = (0..n).map(|j| j < initially_infected).collect();
        let weights: Vec<f64> = (0..n).map(|j| if infected[j] { 0.0 } else { beta1[j] }).collect();
        let infected_list: Vec<usize> = (0..initially_infected).collect();
        let pressure = infected_list.iter().map(|&j| beta2[j]).sum();
        Self {
            susceptibility: Fenwick::from_weights(&weights),
            beta1,
            beta2,
            infected,
            infected_list,
            pressure,
        }
    }

    fn infect(&mut self, j: usize) {
        self.infected[j] = true;
        self.susceptibility.add(j, -self.beta1[j]);
        self.infected_list.push(j);
        self.pressure += self.beta2[j];
    }

    fn recover(&mut self, slot: usize) {
        let j = self.infected_list.swap_remove(slot);
        self.infected[j] = false;
        self.susceptibility.add(j, self.beta1[j]);
        self.pressure -= self.beta2[j];
        if self.infected_list.is_empty() {
            self.pressure = 0.0;
        }
    }

    fn exposure(&self) -> f64 {
        if self.infected_list.len() == self.beta1.len() {
            0.0
        } else {
            self.susceptibility.total().max(0.0)
        }
    }
}

/// Runs `replicas` independent simulations. Replica r draws agent types and
/// events from a generator seeded with `seed + r`, so results do not depend
/// on the thread count.
pub fn simulate_stochastic(config: &ScenarioConfig, n_agents: usize, replicas: usize, seed: u64) -> Result<OracleResult> {
    simulate_stochastic_at(config, n_agents, replicas, seed, &config.output.times_for(config.t_end))
}

pub fn simulate_stochastic_at(
    config: &ScenarioConfig,
    n_agents: usize,
    replicas: usize,
    seed: u64,
    times: &[f64],
) -> Result<OracleResult> {
    config.validate()?;
    if n_agents < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 agents, got {n_agents}")));
    }
    if replicas == 0 {
        return Err(Error::InvalidParameter("need at least one replica".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::GridMismatch("output times must be sorted and nonnegative".into()));
    }
    let runs: Vec<Trajectory> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| run_replica(config, n_agents, seed.wrapping_add(r), times))
        .collect();
    let mean = replica_mean(&runs);
    Ok(OracleResult {
        source: OracleSource::Stochastic,
        mean,
        replicas: runs,
        k1: None,
        k2: None,
        n_agents: Some(n_agents),
    })
}

fn run_replica(config: &ScenarioConfig, n: usize, seed: u64, times: &[f64]) -> Trajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = config.population / n as f64;
    let beta1 = config.susceptibility.sample_with(&mut rng, n);
    let beta2 = config.infectivity.sample_with(&mut rng, n);
    let i0 = ((config.i0 / m).round() as usize).min(n);
    let mut state = Replica::new(beta1, beta2, i0);

    let gamma = config.gamma;
    let mut traj = Trajectory::with_capacity(times.len());
    let (mut t, mut q1, mut q2) = (0.0f64, 0.0f64, 0.0f64);
    let mut next_out = 0;

    loop {
        let exposure = state.exposure();
        let n_inf = state.infected_list.len();
        let infection_rate = m * state.pressure * exposure;
        let recovery_rate = gamma * n_inf as f64;
        let total = infection_rate + recovery_rate;
        let t_next = if total > 0.0 {
            let u: f64 = 1.0 - rng.gen::<f64>();
            t - u.ln() / total
        } else {
            f64::INFINITY
        };

        // rates and q-derivatives are constant until t_next
        let dq1 = -m * state.pressure;
        let dq2 = m * exposure;
        while next_out < times.len() && times[next_out] < t_next {
            let to = times[next_out];
            let dt = to - t;
            let s_count = n - n_inf;
            let b1 = if s_count > 0 { exposure / s_count as f64 } else { 0.0 };
            let b2 = if n_inf > 0 { state.pressure / n_inf as f64 } else { 0.0 };
            traj.push(to, m * s_count as f64, m * n_inf as f64, q1 + dq1 * dt, q2 + dq2 * dt, b1, b2);
            next_out += 1;
        }
        if next_out == times.len() {
            break;
        }
        let dt = t_next - t;
        q1 += dq1 * dt;
        q2 += dq2 * dt;
        t = t_next;

        let pick: f64 = rng.gen::<f64>() * total;
        if pick < infection_rate {
            let mut j = state.susceptibility.search(pick / (m * state.pressure));
            // rounding in the tree can land on a zero-weight slot
            while state.infected[j] {
                j = state.susceptibility.search(rng.gen::<f64>() * exposure);
            }
            state.infect(j);
        } else {
            let slot = rng.gen_range(0..n_inf);
            state.recover(slot);
        }
    }
    traj
}

/// Replica average of S, I, q₁, q₂; the effective rates are pooled
/// ratios of mean exposure to mean mass.
fn replica_mean(runs: &[Trajectory]) -> Trajectory {
    let len = runs[0].len();
    let r = runs.len() as f64;
    let mut out = Trajectory::with_capacity(len);
    for k in 0..len {
        let avg = |f: &dyn Fn(&Trajectory) -> f64| runs.iter().map(f).sum::<f64>() / r;
        let s = avg(&|t| t.s[k]);
        let i = avg(&|t| t.i[k]);
        let exposure = avg(&|t| t.beta1_eff[k] * t.s[k]);
        let pressure = avg(&|t| t.beta2_eff[k] * t.i[k]);
        out.push(
            runs[0].times[k],
            s,
            i,
            avg(&|t| t.q1[k]),
            avg(&|t| t.q2[k]),
            if s > 0.0 { exposure / s } else { 0.0 },
            if i > 0.0 { pressure / i } else { 0.0 },
        );
    }
    out
}
