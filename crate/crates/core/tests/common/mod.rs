// SPDX-License-Identifier: MIT OR Apache-2.0

//! Independent reference implementations and instance generators shared by
//! the integration tests. Nothing here touches the suffix statistics.

#![allow(dead_code)]

use linthresh::{loss_profile, PenaltyConfig, Sample};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two-pass least squares on `{i : x_i >= u}` by rescanning the raw data.
#[derive(Debug, Clone, Copy)]
pub struct NaiveFit {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub loss: f64,
}

pub fn naive_fit(x: &[f64], y: &[f64], u: f64) -> Option<NaiveFit> {
    let idx: Vec<usize> = (0..x.len()).filter(|&i| x[i] >= u).collect();
    let n = idx.len();
    if n < 2 {
        return None;
    }
    let mx = idx.iter().map(|&i| x[i]).sum::<f64>() / n as f64;
    let my = idx.iter().map(|&i| y[i]).sum::<f64>() / n as f64;
    let sxx: f64 = idx.iter().map(|&i| (x[i] - mx).powi(2)).sum();
    let sxy: f64 = idx.iter().map(|&i| (x[i] - mx) * (y[i] - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let beta = sxy / sxx;
    let alpha = my - beta * mx;
    let rss: f64 = idx.iter().map(|&i| (y[i] - alpha - beta * x[i]).powi(2)).sum();
    Some(NaiveFit {
        n,
        alpha,
        beta,
        loss: rss / n as f64,
    })
}

/// Relative error with an absolute floor tied to the scale of the problem.
pub fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / b.abs().max(scale).max(f64::MIN_POSITIVE)
}

/// Generators mixing linear, threshold and wiggly shapes, with and without
/// duplicated x values.
#[derive(Debug, Clone, Copy)]
pub enum Shape {
    Linear,
    Hinge,
    Sine,
    Step,
}

pub fn random_instance(seed: u64, n: usize) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = match rng.random_range(0..4) {
        0 => Shape::Linear,
        1 => Shape::Hinge,
        2 => Shape::Sine,
        _ => Shape::Step,
    };
    let ties = rng.random_bool(0.3);
    let offset = rng.random_range(-50.0..50.0);
    let scale = rng.random_range(0.1..10.0);
    let noise = rng.random_range(0.0..2.0);
    let (x, y): (Vec<f64>, Vec<f64>) = (0..n)
        .map(|_| {
            let t: f64 = if ties {
                rng.random_range(0..20) as f64 / 20.0
            } else {
                rng.random()
            };
            let m = match shape {
                Shape::Linear => 1.0 - 2.0 * t,
                Shape::Hinge => 3.0 * (0.4 - t).max(0.0) + t,
                Shape::Sine => (6.0 * t).sin(),
                Shape::Step => {
                    if t < 0.5 {
                        0.0
                    } else {
                        1.0
                    }
                }
            };
            let e: f64 = rng.random::<f64>() - 0.5;
            (offset + scale * t, 5.0 * m + noise * e)
        })
        .unzip();
    Sample::new(x, y).expect("valid sample")
}

pub fn sample_strategy(max_n: usize) -> impl Strategy<Value = Sample> {
    (any::<u64>(), 8..=max_n).prop_map(|(seed, n)| random_instance(seed, n))
}

fn relative(a: f64, b: f64, scale: f64, tol: f64, what: &str) -> Result<(), TestCaseError> {
    if rel_err(a, b, scale) <= tol {
        Ok(())
    } else {
        Err(TestCaseError::fail(format!("{what}: {a} vs {b}")))
    }
}

fn cfg(c: f64) -> PenaltyConfig {
    PenaltyConfig {
        eta1: 0.05,
        ..PenaltyConfig::with_c(c)
    }
}

/// Every admissible candidate matches the naive rescan.
pub fn check_oracle(sample: &Sample, tol: f64) -> Result<usize, TestCaseError> {
    let profile = loss_profile(sample, &cfg(0.0)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let yscale = sample.y().iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for e in &profile.entries {
        let o = naive_fit(sample.x(), sample.y(), e.u)
            .ok_or_else(|| TestCaseError::fail(format!("oracle degenerate at {}", e.u)))?;
        prop_assert_eq!(o.n, e.n_suffix());
        relative(e.alpha(), o.alpha, yscale, tol, "alpha")?;
        relative(e.beta(), o.beta, yscale / sample.max_x().abs().max(1.0), tol, "beta")?;
        relative(e.loss, o.loss, 1e-6 * yscale * yscale, tol, "loss")?;
    }
    Ok(profile.len())
}

/// Between consecutive candidates the index set, and so the loss, is that of
/// the upper candidate.
pub fn check_piecewise_constant(sample: &Sample) -> Result<(), TestCaseError> {
    let profile = loss_profile(sample, &cfg(0.0)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let x = sample.x();
    for e in &profile.entries {
        let below = x.iter().copied().filter(|&v| v < e.u).fold(f64::NEG_INFINITY, f64::max);
        if below.is_finite() {
            let mid = below + 0.5 * (e.u - below);
            if mid > below && mid < e.u {
                let at: Vec<bool> = x.iter().map(|&v| v >= e.u).collect();
                let between: Vec<bool> = x.iter().map(|&v| v >= mid).collect();
                prop_assert_eq!(at, between);
                let (a, b) = (naive_fit(x, sample.y(), mid), naive_fit(x, sample.y(), e.u));
                prop_assert_eq!(a.map(|f| f.loss.to_bits()), b.map(|f| f.loss.to_bits()));
            }
        }
    }
    Ok(())
}

/// The first candidate is the full sample, so its loss is the mean squared
/// residual of the ordinary fit.
pub fn check_full_sample(sample: &Sample) -> Result<(), TestCaseError> {
    let profile = loss_profile(sample, &cfg(0.0)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let first = &profile.entries[0];
    prop_assert_eq!(first.u, sample.min_x());
    prop_assert_eq!(first.n_suffix(), sample.len());
    let full = naive_fit(sample.x(), sample.y(), f64::NEG_INFINITY).unwrap();
    let yscale = sample.y().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    relative(first.loss, full.loss, 1e-6 * yscale * yscale, 1e-9, "full-sample loss")
}

/// `Σ r = 0` and `Σ x·r = 0` on every suffix, relative to the size of the
/// summands.
pub fn check_normal_equations(sample: &Sample) -> Result<(), TestCaseError> {
    let profile = loss_profile(sample, &cfg(0.0)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for e in &profile.entries {
        let (mut s_r, mut s_xr, mut abs_r, mut abs_xr) = (0.0, 0.0, 0.0, 0.0);
        for (x, y) in sample.points().filter(|&(x, _)| x >= e.u) {
            let r = y - e.fit.alpha - e.fit.beta * x;
            s_r += r;
            s_xr += x * r;
            abs_r += y.abs() + (e.fit.alpha + e.fit.beta * x).abs();
            abs_xr += x.abs() * (y.abs() + (e.fit.alpha + e.fit.beta * x).abs());
        }
        prop_assert!(s_r.abs() <= 1e-8 * abs_r.max(1e-300), "sum r = {s_r} at u = {}", e.u);
        prop_assert!(
            s_xr.abs() <= 1e-8 * abs_xr.max(1e-300),
            "sum x r = {s_xr} at u = {}",
            e.u
        );
    }
    Ok(())
}

/// `y → a + b·y` maps `(α, β, ℓ̂)` to `(a + bα, bβ, b²ℓ̂)`.
pub fn check_equivariance(sample: &Sample, a: f64, b: f64) -> Result<(), TestCaseError> {
    let p = loss_profile(sample, &cfg(0.0)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let moved = sample.map_y(|y| a + b * y).unwrap();
    let q = loss_profile(&moved, &cfg(0.0)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(p.len(), q.len());
    let yscale = sample.y().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let xscale = sample.x().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for (e, f) in p.entries.iter().zip(&q.entries) {
        prop_assert_eq!(e.u, f.u);
        relative(
            f.alpha(),
            a + b * e.alpha(),
            (a.abs() + b.abs() * yscale) * xscale,
            1e-9,
            "alpha",
        )?;
        relative(f.beta(), b * e.beta(), b.abs() * yscale, 1e-9, "beta")?;
        relative(f.loss, b * b * e.loss, 1e-6 * b * b * yscale * yscale, 1e-9, "loss")?;
    }
    Ok(())
}

/// With no penalty the argmin does not move when y is rescaled.
pub fn check_scale_invariance(sample: &Sample, b: f64) -> Result<(), TestCaseError> {
    let u = linthresh::estimate(sample, &cfg(0.0), None).unwrap().u_hat;
    let v = linthresh::estimate(&sample.map_y(|y| b * y).unwrap(), &cfg(0.0), None)
        .unwrap()
        .u_hat;
    prop_assert_eq!(u, v);
    Ok(())
}

/// Repeated estimation, including from a shuffled copy of the data, returns
/// the same bits.
pub fn check_tie_determinism(sample: &Sample, c: f64) -> Result<(), TestCaseError> {
    let first = linthresh::estimate(sample, &cfg(c), None).unwrap();
    let again = linthresh::estimate(sample, &cfg(c), None).unwrap();
    prop_assert_eq!(first.u_hat.to_bits(), again.u_hat.to_bits());
    let mut pts: Vec<(f64, f64)> = sample.points().collect();
    pts.reverse();
    let reversed = Sample::from_pairs(&pts).unwrap();
    let third = linthresh::estimate(&reversed, &cfg(c), None).unwrap();
    // Summation order changes with the input order, so the losses may differ
    // in the last bits; the candidate set and the reported u must not.
    let p = loss_profile(sample, &cfg(c)).unwrap();
    let q = loss_profile(&reversed, &cfg(c)).unwrap();
    prop_assert_eq!(p.candidates().collect::<Vec<_>>(), q.candidates().collect::<Vec<_>>());
    let stable = {
        let best = p.entries[first.candidate_index].penalized;
        let second = p
            .entries
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != first.candidate_index)
            .map(|(_, e)| e.penalized)
            .fold(f64::INFINITY, f64::min);
        second - best > 1e-9 * (1.0 + best.abs())
    };
    if stable {
        prop_assert_eq!(first.u_hat, third.u_hat);
    }
    Ok(())
}

/// `û(c)` never increases along a non-decreasing grid.
pub fn check_monotone_sweep(sample: &Sample, grid: &[f64]) -> Result<(), TestCaseError> {
    let sweep = linthresh::c_sweep(sample, &cfg(0.0), grid).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for w in sweep.points.windows(2) {
        prop_assert!(
            w[1].u_hat <= w[0].u_hat,
            "u_hat rose from {} to {} at c = {}",
            w[0].u_hat,
            w[1].u_hat,
            w[1].c
        );
    }
    Ok(())
}

pub fn c_grid_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..50.0, 2..40).prop_map(|mut v| {
        v.push(0.0);
        v.sort_by(f64::total_cmp);
        v
    })
}
