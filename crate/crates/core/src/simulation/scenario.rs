// SPDX-License-Identifier: MIT OR Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::penalty::PenaltyConfig;
use crate::profile::estimate;
use crate::sample::Sample;
use crate::simulation::model::{linear_piece, r_threshold};
use crate::simulation::rng::ReplicationRng;

/// Regression function the responses are drawn around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// `r_{u0,δ}`: nonlinear below `u0`, linear above.
    #[default]
    Threshold,
    /// The linear piece of `r_{u0,δ}` extended over all of `[0, 1]`.
    Linear,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Threshold => "threshold",
            ModelKind::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub model: ModelKind,
    pub u0: f64,
    pub delta: f64,
    pub sigma: f64,
    pub n: usize,
    pub penalty: PenaltyConfig,
    pub nrep: usize,
    pub base_seed: u64,
}

impl Scenario {
    /// Threshold-model scenario with the simulation defaults
    /// (`ξ = 0.4`, `η₁ = 0.05`, positive-part penalty).
    pub fn new(u0: f64, delta: f64, sigma: f64, n: usize, c: f64, nrep: usize, base_seed: u64) -> Self {
        Scenario {
            model: ModelKind::Threshold,
            u0,
            delta,
            sigma,
            n,
            penalty: PenaltyConfig::with_c(c),
            nrep,
            base_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u0 > 0.0 && self.u0 < 1.0) {
            return Err(Error::InvalidConfig(format!("u0 must lie in (0, 1), got {}", self.u0)));
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "delta must be finite, got {}",
                self.delta
            )));
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sigma must be finite and non-negative, got {}",
                self.sigma
            )));
        }
        if self.n < 10 {
            return Err(Error::InvalidConfig(format!("n must be at least 10, got {}", self.n)));
        }
        if self.nrep < 1 {
            return Err(Error::InvalidConfig("nrep must be at least 1".into()));
        }
        self.penalty.validate()
    }

    /// True `(α₀, β₀)` of the linear region.
    pub fn true_coefficients(&self) -> Result<(f64, f64)> {
        linear_piece(self.u0, self.delta)
    }

    pub fn mean_response(&self, x: f64) -> Result<f64> {
        match self.model {
            ModelKind::Threshold => r_threshold(x, self.u0, self.delta),
            ModelKind::Linear => {
                let (a, b) = linear_piece(self.u0, self.delta)?;
                Ok(a + b * x)
            }
        }
    }
}

/// `n` draws of `X ~ U(0, 1)`, `Y = r(X) + σ·ε`, `ε ~ N(0, 1)`, from the
/// stream `(base_seed, rep_index)`.
pub fn generate_sample(scenario: &Scenario, rep_index: u64) -> Result<Sample> {
    scenario.validate()?;
    let mut rng = ReplicationRng::new(scenario.base_seed, rep_index);
    let mut x = Vec::with_capacity(scenario.n);
    let mut y = Vec::with_capacity(scenario.n);
    for _ in 0..scenario.n {
        let xi = rng.uniform();
        let noise = rng.standard_normal();
        x.push(xi);
        y.push(scenario.mean_response(xi)? + scenario.sigma * noise);
    }
    Sample::new(x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Replicate {
    pub rep: u64,
    pub u_hat: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Five-number summary; quartiles interpolate linearly between order
/// statistics at position `(n − 1)·p` (R's default, type 7).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl Quartiles {
    pub fn of(values: &[f64]) -> Option<Quartiles> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let h = (v.len() - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            v[lo] + (h - lo as f64) * (v[hi] - v[lo])
        };
        Some(Quartiles {
            min: v[0],
            q1: q(0.25),
            median: q(0.5),
            q3: q(0.75),
            max: v[v.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub rep: u64,
    pub code: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: Scenario,
    /// Mean of `|û − u0|` over successful replications; NaN when none
    /// succeeded.
    pub emae: f64,
    pub estimates: Vec<Replicate>,
    pub u_hat: Option<Quartiles>,
    pub alpha: Option<Quartiles>,
    pub beta: Option<Quartiles>,
    pub failures: Vec<Failure>,
}

impl ScenarioResult {
    pub fn failure_count(&self) -> usize {
        self.failures.len()
    }
}

/// Runs every replication (in parallel on the current rayon pool) and
/// aggregates in replication order, so the result does not depend on the
/// thread count.
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioResult> {
    scenario.validate()?;
    let outcomes: Vec<std::result::Result<Replicate, Failure>> = (0..scenario.nrep as u64)
        .into_par_iter()
        .map(|rep| {
            let fail = |e: Error| Failure {
                rep,
                code: e.code().to_string(),
            };
            let sample = generate_sample(scenario, rep).map_err(fail)?;
            let est = estimate(&sample, &scenario.penalty, None).map_err(fail)?;
            Ok(Replicate {
                rep,
                u_hat: est.u_hat,
                alpha: est.fit_at_u_hat.alpha,
                beta: est.fit_at_u_hat.beta,
            })
        })
        .collect();

    let mut estimates = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => estimates.push(r),
            Err(f) => failures.push(f),
        }
    }
    let emae = if estimates.is_empty() {
        f64::NAN
    } else {
        estimates.iter().map(|r| (r.u_hat - scenario.u0).abs()).sum::<f64>() / estimates.len() as f64
    };
    let column = |f: fn(&Replicate) -> f64| Quartiles::of(&estimates.iter().map(f).collect::<Vec<_>>());
    Ok(ScenarioResult {
        scenario: scenario.clone(),
        emae,
        u_hat: column(|r| r.u_hat),
        alpha: column(|r| r.alpha),
        beta: column(|r| r.beta),
        estimates,
        failures,
    })
}

/// One result row per scenario, in input order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScenarioTable {
    pub rows: Vec<ScenarioResult>,
}

impl ScenarioTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// First row keyed by `(u0, δ, σ, n, c)`.
    pub fn get(&self, u0: f64, delta: f64, sigma: f64, n: usize, c: f64) -> Option<&ScenarioResult> {
        self.rows.iter().find(|r| {
            let s = &r.scenario;
            s.u0 == u0 && s.delta == delta && s.sigma == sigma && s.n == n && s.penalty.c == c
        })
    }

    pub fn total_failures(&self) -> usize {
        self.rows.iter().map(ScenarioResult::failure_count).sum()
    }
}

pub fn grid_runner(scenarios: &[Scenario]) -> Result<ScenarioTable> {
    for s in scenarios {
        s.validate()?;
    }
    let rows = scenarios.iter().map(run_scenario).collect::<Result<Vec<_>>>()?;
    Ok(ScenarioTable { rows })
}
