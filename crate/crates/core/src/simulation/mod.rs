// SPDX-License-Identifier: MIT OR Apache-2.0

//! Monte Carlo study of the estimator on the `r_{u0,δ}` family.

pub mod config;
pub mod model;
pub mod rng;
pub mod scenario;

pub use config::ScenarioGrid;
pub use model::{g, g_prime, linear_piece, r_threshold};
pub use scenario::{
    generate_sample, grid_runner, run_scenario, Failure, ModelKind, Quartiles, Replicate, Scenario, ScenarioResult,
    ScenarioTable,
};
