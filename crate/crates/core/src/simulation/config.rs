// SPDX-License-Identifier: MIT OR Apache-2.0

//! Scenario grid files.
//!
//! A grid file is TOML: an optional `[defaults]` table and one
//! `[[scenario]]` block per scenario family. Within a block, `u0`, `delta`,
//! `sigma`, `n` and `c` accept a scalar or a list; a block expands to the
//! cartesian product in that nesting order (`c` varies fastest). Every
//! scenario expanded from a block shares the block's seed, so results for
//! different `c` are paired on identical samples.
//!
//! ```toml
//! [defaults]
//! nrep = 200
//! seed = 1
//!
//! [[scenario]]
//! u0 = 0.5
//! delta = -1.0
//! sigma = 0.01
//! n = [200, 1000, 2000]
//! c = [0.0, 0.01]
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::penalty::{PenaltyConfig, PenaltyFn};
use crate::simulation::scenario::{ModelKind, Scenario};

pub const DEFAULT_NREP: usize = 200;
pub const FULL_SCALE_NREP: usize = 1000;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum PenaltyName {
    #[default]
    PositivePart,
    Arctan,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Settings {
    model: Option<ModelKind>,
    nrep: Option<usize>,
    seed: Option<u64>,
    xi: Option<f64>,
    eta1: Option<f64>,
    penalty: Option<PenaltyName>,
    shift: Option<f64>,
}

impl Settings {
    fn or(&self, fallback: &Settings) -> Settings {
        Settings {
            model: self.model.or(fallback.model),
            nrep: self.nrep.or(fallback.nrep),
            seed: self.seed.or(fallback.seed),
            xi: self.xi.or(fallback.xi),
            eta1: self.eta1.or(fallback.eta1),
            penalty: self.penalty.or(fallback.penalty),
            shift: self.shift.or(fallback.shift),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Block {
    #[serde(default)]
    name: Option<String>,
    u0: OneOrMany<f64>,
    delta: OneOrMany<f64>,
    sigma: OneOrMany<f64>,
    n: OneOrMany<usize>,
    c: OneOrMany<f64>,
    model: Option<ModelKind>,
    nrep: Option<usize>,
    seed: Option<u64>,
    xi: Option<f64>,
    eta1: Option<f64>,
    penalty: Option<PenaltyName>,
    shift: Option<f64>,
}

impl Block {
    fn settings(&self) -> Settings {
        Settings {
            model: self.model,
            nrep: self.nrep,
            seed: self.seed,
            xi: self.xi,
            eta1: self.eta1,
            penalty: self.penalty,
            shift: self.shift,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    #[serde(default)]
    defaults: Settings,
    #[serde(default)]
    scenario: Vec<Block>,
}

/// Scenarios expanded from a grid file, with the block name each came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioGrid {
    pub scenarios: Vec<Scenario>,
    pub labels: Vec<String>,
}

impl ScenarioGrid {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let file: GridFile = toml::from_str(text).map_err(|e| e.to_string())?;
        let mut scenarios = Vec::new();
        let mut labels = Vec::new();
        for (i, block) in file.scenario.iter().enumerate() {
            let s = block.settings().or(&file.defaults);
            let penalty_fn = match s.penalty.unwrap_or_default() {
                PenaltyName::PositivePart => PenaltyFn::PositivePart,
                PenaltyName::Arctan => PenaltyFn::Arctan,
            };
            let label = block.name.clone().unwrap_or_else(|| format!("scenario-{}", i + 1));
            for u0 in block.u0.to_vec() {
                for delta in block.delta.to_vec() {
                    for sigma in block.sigma.to_vec() {
                        for n in block.n.to_vec() {
                            for c in block.c.to_vec() {
                                let scenario = Scenario {
                                    model: s.model.unwrap_or_default(),
                                    u0,
                                    delta,
                                    sigma,
                                    n,
                                    penalty: PenaltyConfig {
                                        c,
                                        xi: s.xi.unwrap_or(0.4),
                                        penalty_fn: penalty_fn.clone(),
                                        shift: s.shift,
                                        eta1: s.eta1.unwrap_or(0.05),
                                        min_suffix: None,
                                    },
                                    nrep: s.nrep.unwrap_or(DEFAULT_NREP),
                                    base_seed: s.seed.unwrap_or(DEFAULT_SEED),
                                };
                                scenario.validate().map_err(|e| format!("{label}: {e}"))?;
                                scenarios.push(scenario);
                                labels.push(label.clone());
                            }
                        }
                    }
                }
            }
        }
        Ok(ScenarioGrid { scenarios, labels })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|message| Error::Config {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Overrides the replication count of every scenario.
    pub fn with_nrep(mut self, nrep: usize) -> Self {
        for s in &mut self.scenarios {
            s.nrep = nrep;
        }
        self
    }
}
