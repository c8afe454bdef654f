// SPDX-License-Identifier: MIT OR Apache-2.0

//! Loss profile over admissible candidates, the penalized argmin, and the
//! sweep over penalty constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::penalty::PenaltyConfig;
use crate::refit::Refit;
use crate::sample::Sample;
use crate::suffix::{LinearFit, SuffixStats};

/// Two penalized values are tied when they differ by at most
/// `TIE_TOL·(1 + |PL_min|)`.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    /// Candidate threshold, a distinct observed covariate value.
    pub u: f64,
    pub fit: LinearFit,
    /// `ℓ̂(u)`
    pub loss: f64,
    /// `f(u)`
    pub penalty: f64,
    /// `ℓ̂(u) + λ_n·f(u)`
    pub penalized: f64,
}

impl ProfileEntry {
    pub fn n_suffix(&self) -> usize {
        self.fit.n_used
    }

    pub fn alpha(&self) -> f64 {
        self.fit.alpha
    }

    pub fn beta(&self) -> f64 {
        self.fit.beta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossProfile {
    pub entries: Vec<ProfileEntry>,
    /// Upper end of the search region, the empirical `1 − η₁` quantile.
    pub gamma_n: f64,
    pub lambda_n: f64,
    pub n: usize,
    pub min_suffix: usize,
    /// Candidates at or below `γ_n` dropped because their suffix has constant
    /// covariate.
    pub degenerate_excluded: usize,
    pub config: PenaltyConfig,
}

/// Evaluates `ℓ̂` and `PL` at every distinct covariate value `u ≤ γ_n` whose
/// suffix holds at least `max(3, ⌈η₁·n⌉)` observations.
///
/// `γ_n` is the order statistic `x_(⌈(1−η₁)·n⌉)`; it is itself a candidate
/// when it passes the suffix-size filter.
pub fn loss_profile(sample: &Sample, config: &PenaltyConfig) -> Result<LossProfile> {
    config.validate()?;
    let n = sample.len();
    let stats = SuffixStats::build(sample);
    let gamma_n = sample.order_statistic(config.cutoff_rank(n));
    let min_suffix = config.min_suffix(n);
    let lambda_n = config.lambda(n);
    let min_x = sample.min_x();

    let mut entries = Vec::new();
    let mut degenerate_excluded = 0;
    for (k, &u) in stats.values().iter().enumerate() {
        if u > gamma_n {
            break;
        }
        if stats.moments(k).count < min_suffix {
            continue;
        }
        let fit = match stats.fit_with_min(k, min_suffix) {
            Ok(fit) => fit,
            Err(Error::DegenerateDesign { .. }) => {
                degenerate_excluded += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let loss = fit.mean_squared_residual();
        let penalty = config.penalty_at(u, min_x);
        entries.push(ProfileEntry {
            u,
            fit,
            loss,
            penalty,
            penalized: loss + lambda_n * penalty,
        });
    }
    if entries.is_empty() {
        return Err(Error::NoCandidates { gamma_n, min_suffix });
    }
    Ok(LossProfile {
        entries,
        gamma_n,
        lambda_n,
        n,
        min_suffix,
        degenerate_excluded,
        config: config.clone(),
    })
}

impl LossProfile {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn candidates(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.u)
    }

    /// Index of the minimal stored penalized value.
    pub fn argmin(&self) -> Option<usize> {
        argmin_low(self.entries.iter().map(|e| e.penalized))
    }

    /// Argmin under a different penalty weight, reusing the loss column.
    pub fn argmin_with_lambda(&self, lambda: f64) -> Option<usize> {
        argmin_low(self.entries.iter().map(|e| e.loss + lambda * e.penalty))
    }

    /// The same profile re-penalized with constant `c`.
    pub fn with_c(&self, c: f64) -> Result<LossProfile> {
        let config = PenaltyConfig {
            c,
            ..self.config.clone()
        };
        config.validate()?;
        let lambda_n = config.lambda(self.n);
        let entries = self
            .entries
            .iter()
            .map(|e| ProfileEntry {
                penalized: e.loss + lambda_n * e.penalty,
                ..*e
            })
            .collect();
        Ok(LossProfile {
            entries,
            lambda_n,
            config,
            ..self.clone()
        })
    }
}

/// First index whose value is within the tie tolerance of the minimum, so
/// ties resolve toward the smallest candidate.
fn argmin_low(values: impl Iterator<Item = f64> + Clone) -> Option<usize> {
    let min = values.clone().fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return None;
    }
    let tol = TIE_TOL * (1.0 + min.abs());
    values.into_iter().position(|v| v - min <= tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub u_hat: f64,
    /// Position of `u_hat` in the profile's entries.
    pub candidate_index: usize,
    pub fit_at_u_hat: LinearFit,
    pub loss: f64,
    pub penalized: f64,
    pub lambda_n: f64,
    pub gamma_n: f64,
    pub n: usize,
    pub refit: Option<Refit>,
}

pub fn estimate_threshold(profile: &LossProfile) -> Result<ThresholdEstimate> {
    let k = profile.argmin().ok_or(Error::NoCandidates {
        gamma_n: profile.gamma_n,
        min_suffix: profile.min_suffix,
    })?;
    let e = &profile.entries[k];
    Ok(ThresholdEstimate {
        u_hat: e.u,
        candidate_index: k,
        fit_at_u_hat: e.fit,
        loss: e.loss,
        penalized: e.penalized,
        lambda_n: profile.lambda_n,
        gamma_n: profile.gamma_n,
        n: profile.n,
        refit: None,
    })
}

/// Profile, argmin and (when `psi` is given) the refit beyond `û + ψ`.
pub fn estimate(sample: &Sample, config: &PenaltyConfig, psi: Option<f64>) -> Result<ThresholdEstimate> {
    let profile = loss_profile(sample, config)?;
    let mut est = estimate_threshold(&profile)?;
    if let Some(psi) = psi {
        est.refit = Some(crate::refit::refit_beyond(sample, est.u_hat, psi)?);
    }
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub c: f64,
    pub u_hat: f64,
}

/// Maximal run of consecutive grid values sharing one estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub c_start: f64,
    pub c_end: f64,
    pub u_hat: f64,
    pub grid_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub gamma_n: f64,
    pub n: usize,
}

impl Sweep {
    pub fn plateaus(&self) -> Vec<Plateau> {
        let mut out: Vec<Plateau> = Vec::new();
        for p in &self.points {
            match out.last_mut() {
                Some(last) if last.u_hat == p.u_hat => {
                    last.c_end = p.c;
                    last.grid_points += 1;
                }
                _ => out.push(Plateau {
                    c_start: p.c,
                    c_end: p.c,
                    u_hat: p.u_hat,
                    grid_points: 1,
                }),
            }
        }
        out
    }

    /// Grid values where the estimate differs from the previous grid value.
    pub fn change_points(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .filter(|w| w[0].u_hat != w[1].u_hat)
            .map(|w| w[1].c)
            .collect()
    }

    /// Distinct estimates in order of appearance.
    pub fn distinct_estimates(&self) -> Vec<f64> {
        self.plateaus().iter().map(|p| p.u_hat).collect()
    }
}

/// `û(c)` for every `c` in a non-decreasing grid. The profile is built once
/// from `template` (its `c` is ignored); each grid value only re-weights the
/// penalty column.
pub fn c_sweep(sample: &Sample, template: &PenaltyConfig, c_grid: &[f64]) -> Result<Sweep> {
    if let Some(bad) = c_grid.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
        return Err(Error::InvalidConfig(format!(
            "c grid values must be finite and non-negative, got {bad}"
        )));
    }
    if c_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidConfig("c grid must be non-decreasing".into()));
    }
    let profile = loss_profile(sample, template)?;
    let points = c_grid
        .iter()
        .map(|&c| {
            let lambda = PenaltyConfig { c, ..template.clone() }.lambda(profile.n);
            let k = profile
                .argmin_with_lambda(lambda)
                .expect("profile has at least one finite entry");
            SweepPoint {
                c,
                u_hat: profile.entries[k].u,
            }
        })
        .collect();
    Ok(Sweep {
        points,
        gamma_n: profile.gamma_n,
        n: profile.n,
    })
}
