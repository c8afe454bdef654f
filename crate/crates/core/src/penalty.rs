// SPDX-License-Identifier: MIT OR Apache-2.0

//! Penalty weight `λ_n = c·n^(−ξ)`, the penalty shape `f`, and the tail mass
//! `η₁` that bounds the threshold search from above.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the non-negative, non-decreasing penalty function `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PenaltyFn {
    /// `f(u) = max(u − shift, 0)`.
    PositivePart,
    /// `f(u) = max(arctan(u − shift), 0)`.
    Arctan,
    /// Piecewise-linear interpolation through `(u, f(u))` knots, held
    /// constant outside the knot range.
    Tabulated { knots: Vec<(f64, f64)> },
}

impl PenaltyFn {
    pub fn name(&self) -> &'static str {
        match self {
            PenaltyFn::PositivePart => "positive-part",
            PenaltyFn::Arctan => "arctan",
            PenaltyFn::Tabulated { .. } => "tabulated",
        }
    }

    fn validate(&self) -> Result<()> {
        let PenaltyFn::Tabulated { knots } = self else {
            return Ok(());
        };
        if knots.is_empty() {
            return Err(Error::InvalidConfig("tabulated penalty has no knots".into()));
        }
        if knots.iter().any(|(u, f)| !u.is_finite() || !f.is_finite()) {
            return Err(Error::InvalidConfig("tabulated penalty knots must be finite".into()));
        }
        if knots.iter().any(|&(_, f)| f < 0.0) {
            return Err(Error::InvalidConfig("tabulated penalty must be non-negative".into()));
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidConfig(
                    "tabulated penalty knots must be strictly increasing in u".into(),
                ));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::InvalidConfig("tabulated penalty must be non-decreasing".into()));
            }
        }
        Ok(())
    }

    fn eval(&self, u: f64) -> f64 {
        match self {
            PenaltyFn::PositivePart => u.max(0.0),
            PenaltyFn::Arctan => u.atan().max(0.0),
            PenaltyFn::Tabulated { knots } => interpolate(knots, u),
        }
    }
}

fn interpolate(knots: &[(f64, f64)], u: f64) -> f64 {
    let first = knots[0];
    let last = knots[knots.len() - 1];
    if u <= first.0 {
        return first.1;
    }
    if u >= last.0 {
        return last.1;
    }
    let i = knots.partition_point(|&(k, _)| k <= u);
    let (u0, f0) = knots[i - 1];
    let (u1, f1) = knots[i];
    f0 + (f1 - f0) * (u - u0) / (u1 - u0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyConfig {
    /// Penalty constant `c ≥ 0`.
    pub c: f64,
    /// Decay exponent `ξ ∈ (0, 1/2)`.
    pub xi: f64,
    pub penalty_fn: PenaltyFn,
    /// Origin of `f`. `None` uses the smallest observed covariate.
    pub shift: Option<f64>,
    /// Tail mass `η₁ ∈ (0, 1)`; the search stops at the empirical
    /// `1 − η₁` quantile.
    pub eta1: f64,
    /// Overrides the default minimum suffix size `max(3, ⌈η₁·n⌉)`.
    #[serde(default)]
    pub min_suffix: Option<usize>,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        PenaltyConfig {
            c: 0.0,
            xi: 0.4,
            penalty_fn: PenaltyFn::PositivePart,
            shift: None,
            eta1: 0.05,
            min_suffix: None,
        }
    }
}

impl PenaltyConfig {
    pub fn with_c(c: f64) -> Self {
        PenaltyConfig {
            c,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "penalty constant c must be finite and non-negative, got {}",
                self.c
            )));
        }
        if !(self.xi > 0.0 && self.xi < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "exponent xi must lie in (0, 0.5), got {}",
                self.xi
            )));
        }
        if !(self.eta1 > 0.0 && self.eta1 < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "eta1 must lie in (0, 1), got {}",
                self.eta1
            )));
        }
        if let Some(s) = self.shift {
            if !s.is_finite() {
                return Err(Error::InvalidConfig(format!("shift must be finite, got {s}")));
            }
        }
        if let Some(m) = self.min_suffix {
            if m < 3 {
                return Err(Error::InvalidConfig(format!(
                    "minimum suffix size must be at least 3, got {m}"
                )));
            }
        }
        self.penalty_fn.validate()
    }

    /// `λ_n = c·n^(−ξ)`.
    pub fn lambda(&self, n: usize) -> f64 {
        self.c * (n as f64).powf(-self.xi)
    }

    /// `f(u)`, with `min_x` standing in for an unset shift.
    pub fn penalty_at(&self, u: f64, min_x: f64) -> f64 {
        let shift = self.shift.unwrap_or(min_x);
        self.penalty_fn.eval(u - shift)
    }

    pub fn min_suffix(&self, n: usize) -> usize {
        self.min_suffix
            .unwrap_or_else(|| ceil_index(self.eta1 * n as f64).max(3))
    }

    /// 1-based rank of the order statistic used as `γ_n`:
    /// `⌈(1 − η₁)·n⌉`, clamped to `[1, n]`.
    pub fn cutoff_rank(&self, n: usize) -> usize {
        ceil_index((1.0 - self.eta1) * n as f64).clamp(1, n)
    }
}

/// Ceiling that ignores representation error in products such as
/// `0.95 * 100`.
fn ceil_index(v: f64) -> usize {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * v.abs().max(1.0) {
        r as usize
    } else {
        v.ceil() as usize
    }
}
