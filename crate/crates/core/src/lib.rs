//! Heterogeneous SIS epidemic dynamics.
//!
//! Nodes carry an individual susceptibility β₁ and infectivity β₂ drawn
//! from [`DistributionSpec`]s. The population-level dynamics reduce to four
//! ODEs (susceptible and infected mass plus two tilt variables) driven by
//! the log-derivative of each distribution's moment generating function.
//! Around that core the crate provides the reciprocal-linear closed-form
//! solution, the final-size prediction for constant infectivity, and two
//! brute-force oracles (a binned cohort integrator and an exact stochastic
//! simulation) to check the reduction against.

pub mod distributions;
pub mod error;
pub mod exact_solution;
pub mod final_size;
pub mod ode;
pub mod oracles;
pub mod output;
pub mod quadrature;
pub mod reduced_ode;

pub use distributions::{DistributionSpec, HLimits, TiltDomain};
pub use error::{Error, Result};
pub use reduced_ode::{integrate, integrate_at, OutputGrid, ScenarioConfig, Trajectory};
