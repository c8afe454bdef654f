// SPDX-License-Identifier: MIT OR Apache-2.0

mod common;

use common::{naive_fit, random_instance, rel_err};
use linthresh::simulation::{generate_sample, Scenario};
use linthresh::{
    c_sweep, empirical_loss, estimate, estimate_threshold, loss_profile, suffix_ls_fit, PenaltyConfig, Sample,
    SuffixStats,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn suffix_sums_match_direct_summation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pts: Vec<(f64, f64)> = (0..50)
        .map(|_| (rng.random_range(-3.0..3.0), rng.random_range(-1.0..1.0)))
        .collect();
    let sample = Sample::from_pairs(&pts).unwrap();
    let stats = SuffixStats::build(&sample);
    let full = stats.moments(0);
    assert_eq!(full.count, 50);
    for k in 0..stats.len() {
        let u = stats.value(k);
        let sub: Vec<_> = pts.iter().filter(|p| p.0 >= u).collect();
        let m = stats.moments(k);
        assert_eq!(m.count, sub.len());
        let direct = [
            sub.iter().map(|p| p.0).sum::<f64>(),
            sub.iter().map(|p| p.0 * p.0).sum::<f64>(),
            sub.iter().map(|p| p.1).sum::<f64>(),
            sub.iter().map(|p| p.1 * p.1).sum::<f64>(),
            sub.iter().map(|p| p.0 * p.1).sum::<f64>(),
        ];
        let ours = [m.sum_x, m.sum_xx, m.sum_y, m.sum_yy, m.sum_xy];
        // Scale by the sum of magnitudes: signed sums can cancel to ~0.
        let mags = [
            sub.iter().map(|p| p.0.abs()).sum::<f64>(),
            sub.iter().map(|p| p.0 * p.0).sum::<f64>(),
            sub.iter().map(|p| p.1.abs()).sum::<f64>(),
            sub.iter().map(|p| p.1 * p.1).sum::<f64>(),
            sub.iter().map(|p| (p.0 * p.1).abs()).sum::<f64>(),
        ];
        for i in 0..5 {
            assert!((ours[i] - direct[i]).abs() <= 1e-12 * mags[i], "k={k} i={i}");
        }
        assert!(m.count as f64 * m.sum_xx - m.sum_x * m.sum_x >= -1e-9 * m.sum_xx);
        if k > 0 {
            assert!(stats.moments(k).count < stats.moments(k - 1).count);
        }
    }
}

#[test]
fn empirical_loss_matches_per_candidate_refit() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pts: Vec<(f64, f64)> = (0..20).map(|_| (rng.random(), rng.random())).collect();
    let sample = Sample::from_pairs(&pts).unwrap();
    let stats = SuffixStats::build(&sample);
    for k in 0..stats.len() - 2 {
        let fit = suffix_ls_fit(&stats, k).unwrap();
        let loss = empirical_loss(&stats, k, &fit).unwrap();
        let o = naive_fit(sample.x(), sample.y(), stats.value(k)).unwrap();
        assert!(rel_err(loss, o.loss, 1e-12) < 1e-9, "k={k}: {loss} vs {}", o.loss);
    }
}

#[test]
fn hundred_uniform_points_cutoff_at_95th_order_statistic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x: Vec<f64> = (0..100).map(|_| rng.random()).collect();
    let y: Vec<f64> = (0..100).map(|_| rng.random()).collect();
    let sample = Sample::new(x.clone(), y).unwrap();
    let profile = loss_profile(&sample, &PenaltyConfig::default()).unwrap();
    let mut sorted = x;
    sorted.sort_by(f64::total_cmp);
    assert_eq!(profile.gamma_n, sorted[94]);
    let cands: Vec<f64> = profile.candidates().collect();
    assert_eq!(cands, sorted[..95].to_vec());
    assert!(profile.entries.iter().all(|e| e.penalized == e.loss));
}

#[test]
fn noiseless_linear_picks_smallest_candidate() {
    let pts: Vec<(f64, f64)> = (0..40).map(|i| (i as f64, 3.0 - 0.5 * i as f64)).collect();
    let sample = Sample::from_pairs(&pts).unwrap();
    let est = estimate(&sample, &PenaltyConfig::with_c(0.1), Some(0.0)).unwrap();
    assert_eq!(est.u_hat, 0.0);
    assert!((est.fit_at_u_hat.beta + 0.5).abs() < 1e-12);
    let refit = est.refit.unwrap();
    assert_eq!(refit.fit.alpha, est.fit_at_u_hat.alpha);
    assert_eq!(refit.fit.beta, est.fit_at_u_hat.beta);
}

#[test]
fn unpenalized_sweep_starts_high_on_nonlinear_data() {
    // A sweep from c = 0 should settle at or near the top of the search range.
    let s = Scenario::new(0.5, -1.0, 0.01, 500, 0.0, 1, 99);
    let sample = generate_sample(&s, 0).unwrap();
    let sweep = c_sweep(&sample, &PenaltyConfig::default(), &[0.0, 0.01, 10.0]).unwrap();
    assert!(sweep.points[0].u_hat > 0.5);
    assert!(sweep.points[2].u_hat < sweep.points[0].u_hat);
}

#[test]
fn oracle_on_many_instances() {
    for seed in 0..50 {
        let s = random_instance(seed, 20 + (seed as usize * 7) % 180);
        common::check_oracle(&s, 1e-9).unwrap();
    }
}

/// Above `u0` the regression is linear, so the empirical loss should sit at
/// the noise level uniformly over the candidates up to `γ_n`.
#[test]
fn population_flatness_above_threshold() {
    let (u0, sigma, n) = (0.5, 0.1, 100_000usize);
    let s = Scenario::new(u0, -1.0, sigma, n, 0.0, 1, 2024);
    let sample = generate_sample(&s, 0).unwrap();
    let profile = loss_profile(&sample, &s.penalty).unwrap();
    let bound = 5.0 * sigma * sigma * (n as f64).powf(-0.5) * (n as f64).ln();
    let worst = profile
        .entries
        .iter()
        .filter(|e| e.u >= u0)
        .map(|e| (e.loss - sigma * sigma).abs())
        .fold(0.0, f64::max);
    assert!(worst <= bound, "max deviation {worst} exceeds {bound}");
    // And strictly larger well below u0.
    let below = profile.entries.iter().find(|e| e.u >= 0.2).unwrap();
    assert!(below.loss > sigma * sigma + bound);
}

#[test]
fn profile_then_estimate_agree_with_estimate() {
    let s = random_instance(5, 120);
    let cfg = PenaltyConfig::with_c(0.3);
    let p = loss_profile(&s, &cfg).unwrap();
    let a = estimate_threshold(&p).unwrap();
    let b = estimate(&s, &cfg, None).unwrap();
    assert_eq!(a.u_hat, b.u_hat);
    assert!(p.candidates().any(|u| u == a.u_hat));
}
