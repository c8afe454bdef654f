// SPDX-License-Identifier: MIT OR Apache-2.0

//! Least-squares refit on `{x ≥ û + ψ}` with the plug-in asymptotic
//! covariance `σ̂²·{(1/n)·Σ 1{x ≥ û+ψ} X̃X̃ᵀ}⁻¹ / n`, `X̃ = (1, x)ᵀ`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::suffix::{LinearFit, SuffixStats, DEFAULT_MIN_SUFFIX};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Refit {
    pub psi: f64,
    /// `û + ψ`
    pub cutoff: f64,
    pub fit: LinearFit,
    /// `rss / (m − 2)`
    pub sigma2_hat: f64,
    /// Covariance of `(α̂, β̂)`, row-major.
    pub covariance: [[f64; 2]; 2],
    pub se_alpha: f64,
    pub se_beta: f64,
    pub z_alpha: f64,
    pub z_beta: f64,
    /// Two-sided normal p-values for the null of a zero coefficient.
    pub p_alpha: f64,
    pub p_beta: f64,
}

impl Refit {
    /// Two-sided Wald interval for the slope at confidence `level`.
    pub fn beta_interval(&self, level: f64) -> (f64, f64) {
        wald_interval(self.fit.beta, self.se_beta, level)
    }

    pub fn alpha_interval(&self, level: f64) -> (f64, f64) {
        wald_interval(self.fit.alpha, self.se_alpha, level)
    }
}

pub fn wald_interval(estimate: f64, se: f64, level: f64) -> (f64, f64) {
    assert!(level > 0.0 && level < 1.0, "confidence level must lie in (0, 1)");
    let z = standard_normal().inverse_cdf(0.5 + level / 2.0);
    (estimate - z * se, estimate + z * se)
}

fn standard_normal() -> Normal {
    Normal::standard()
}

fn two_sided_p(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    2.0 * standard_normal().sf(z.abs())
}

pub fn refit_beyond(sample: &Sample, u_hat: f64, psi: f64) -> Result<Refit> {
    if !(psi.is_finite() && psi >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "refit offset psi must be finite and non-negative, got {psi}"
        )));
    }
    let cutoff = u_hat + psi;
    let stats = SuffixStats::build(sample);
    let k = stats.index_at_or_above(cutoff).ok_or(Error::InsufficientSuffix {
        u: cutoff,
        available: 0,
        required: DEFAULT_MIN_SUFFIX,
    })?;
    let fit = stats.fit(k)?;
    let m = fit.n_used as f64;
    let sigma2_hat = fit.rss / (m - 2.0);

    // σ̂²·(Σ X̃X̃ᵀ)⁻¹ written with centered moments
    let var_beta = sigma2_hat / fit.ss_x;
    let var_alpha = sigma2_hat * (1.0 / m + fit.mean_x * fit.mean_x / fit.ss_x);
    let cov_ab = -sigma2_hat * fit.mean_x / fit.ss_x;
    let covariance = [[var_alpha, cov_ab], [cov_ab, var_beta]];

    let se_alpha = var_alpha.sqrt();
    let se_beta = var_beta.sqrt();
    let z_alpha = fit.alpha / se_alpha;
    let z_beta = fit.beta / se_beta;
    Ok(Refit {
        psi,
        cutoff,
        fit,
        sigma2_hat,
        covariance,
        se_alpha,
        se_beta,
        z_alpha,
        z_beta,
        p_alpha: two_sided_p(z_alpha),
        p_beta: two_sided_p(z_beta),
    })
}
