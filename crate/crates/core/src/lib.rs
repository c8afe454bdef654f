// SPDX-License-Identifier: MIT OR Apache-2.0

//! Estimation of the threshold `u₀` above which a regression function is
//! linear.
//!
//! For every candidate `u` (a distinct observed covariate value up to the
//! empirical `1 − η₁` quantile `γ_n`) the observations with `x ≥ u` are fitted
//! by least squares and scored by their mean squared residual `ℓ̂(u)`. The
//! estimate minimizes the penalized loss
//!
//! ```text
//! PL(u) = ℓ̂(u) + c·n^(−ξ)·f(u)
//! ```
//!
//! with `f` non-negative and non-decreasing, so that among equally good fits
//! the smallest threshold wins. Coefficients refitted on `x ≥ û + ψ` come with
//! a plug-in covariance for Wald inference.
//!
//! ```
//! use linthresh::{estimate, PenaltyConfig, Sample};
//!
//! let x: Vec<f64> = (0..200).map(|i| i as f64 / 200.0).collect();
//! let y: Vec<f64> = x.iter().map(|&v| if v < 0.4 { 5.0 * (0.4 - v) } else { 0.0 }).collect();
//! let sample = Sample::new(x, y)?;
//! let est = estimate(&sample, &PenaltyConfig::with_c(0.01), Some(0.05))?;
//! assert!((est.u_hat - 0.4).abs() < 0.02);
//! assert!(est.refit.unwrap().fit.beta.abs() < 1e-9);
//! # Ok::<(), linthresh::Error>(())
//! ```

pub mod airquality;
pub mod error;
pub mod io;
pub mod penalty;
pub mod profile;
pub mod refit;
pub mod sample;
pub mod simulation;
pub mod suffix;

pub use error::{Error, Result};
pub use penalty::{PenaltyConfig, PenaltyFn};
pub use profile::{
    c_sweep, estimate, estimate_threshold, loss_profile, LossProfile, Plateau, ProfileEntry, Sweep, SweepPoint,
    ThresholdEstimate,
};
pub use refit::{refit_beyond, wald_interval, Refit};
pub use sample::Sample;
pub use suffix::{empirical_loss, suffix_ls_fit, LinearFit, SuffixMoments, SuffixStats};
