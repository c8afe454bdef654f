// SPDX-License-Identifier: MIT OR Apache-2.0

//! Right-to-left cumulative sufficient statistics over the covariate-sorted
//! sample, and the least-squares fit of the observations with `x ≥ u` for
//! every distinct covariate value `u`.
//!
//! Raw sums are kept in data units. The fits use centered moments, which are
//! accumulated alongside the raw sums with Welford updates so that covariates
//! far from zero do not lose precision to cancellation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::Sample;

/// Fits need at least this many observations: two for the line, one for a
/// residual degree of freedom.
pub const DEFAULT_MIN_SUFFIX: usize = 3;

/// Relative tolerance on the centered covariate sum of squares below which a
/// suffix is treated as having constant `x`.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Statistics of the observations with `x ≥ u` for one candidate `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuffixMoments {
    pub count: usize,
    pub sum_x: f64,
    pub sum_xx: f64,
    pub sum_y: f64,
    pub sum_yy: f64,
    pub sum_xy: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    /// `Σ (x − x̄)²`
    pub ss_x: f64,
    /// `Σ (y − ȳ)²`
    pub ss_y: f64,
    /// `Σ (x − x̄)(y − ȳ)`
    pub ss_xy: f64,
}

impl SuffixMoments {
    const EMPTY: SuffixMoments = SuffixMoments {
        count: 0,
        sum_x: 0.0,
        sum_xx: 0.0,
        sum_y: 0.0,
        sum_yy: 0.0,
        sum_xy: 0.0,
        mean_x: 0.0,
        mean_y: 0.0,
        ss_x: 0.0,
        ss_y: 0.0,
        ss_xy: 0.0,
    };

    fn push(&mut self, x: f64, y: f64) {
        self.count += 1;
        self.sum_x += x;
        self.sum_xx += x * x;
        self.sum_y += y;
        self.sum_yy += y * y;
        self.sum_xy += x * y;

        let n = self.count as f64;
        let dx = x - self.mean_x;
        let dy = y - self.mean_y;
        self.mean_x += dx / n;
        self.mean_y += dy / n;
        self.ss_x += dx * (x - self.mean_x);
        self.ss_y += dy * (y - self.mean_y);
        self.ss_xy += dx * (y - self.mean_y);
    }
}

/// Suffix statistics indexed by distinct covariate value, ascending.
#[derive(Debug, Clone)]
pub struct SuffixStats {
    values: Vec<f64>,
    moments: Vec<SuffixMoments>,
}

impl SuffixStats {
    /// One pass over the sample in descending covariate order. Ties are
    /// collapsed into a single candidate whose suffix includes all of them.
    pub fn build(sample: &Sample) -> Self {
        let order = sample.sorted_by_x();
        let (x, y) = (sample.x(), sample.y());
        let mut values = Vec::new();
        let mut moments = Vec::new();
        let mut acc = SuffixMoments::EMPTY;
        for pos in (0..order.len()).rev() {
            let i = order[pos];
            acc.push(x[i], y[i]);
            if pos == 0 || x[order[pos - 1]] != x[i] {
                values.push(x[i]);
                moments.push(acc);
            }
        }
        values.reverse();
        moments.reverse();
        SuffixStats { values, moments }
    }

    /// Number of distinct covariate values.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sample_size(&self) -> usize {
        self.moments[0].count
    }

    /// Distinct covariate values, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn moments(&self, k: usize) -> &SuffixMoments {
        &self.moments[k]
    }

    /// Index of the first distinct value `≥ u`, if any.
    pub fn index_at_or_above(&self, u: f64) -> Option<usize> {
        let k = self.values.partition_point(|&v| v < u);
        (k < self.values.len()).then_some(k)
    }

    /// Least-squares fit on the suffix starting at candidate `k`, requiring at
    /// least [`DEFAULT_MIN_SUFFIX`] observations.
    pub fn fit(&self, k: usize) -> Result<LinearFit> {
        self.fit_with_min(k, DEFAULT_MIN_SUFFIX)
    }

    pub fn fit_with_min(&self, k: usize, min_suffix: usize) -> Result<LinearFit> {
        let m = &self.moments[k];
        let u = self.values[k];
        if m.count < min_suffix.max(DEFAULT_MIN_SUFFIX) {
            return Err(Error::InsufficientSuffix {
                u,
                available: m.count,
                required: min_suffix.max(DEFAULT_MIN_SUFFIX),
            });
        }
        if m.ss_x <= DEGENERACY_TOL * m.sum_xx {
            return Err(Error::DegenerateDesign { u, n: m.count });
        }
        let beta = m.ss_xy / m.ss_x;
        let alpha = m.mean_y - beta * m.mean_x;
        let rss = (m.ss_y - beta * m.ss_xy).max(0.0);
        Ok(LinearFit {
            alpha,
            beta,
            n_used: m.count,
            rss,
            mean_x: m.mean_x,
            mean_y: m.mean_y,
            ss_x: m.ss_x,
        })
    }
}

/// Ordinary least-squares line fitted to one suffix of the sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub alpha: f64,
    pub beta: f64,
    pub n_used: usize,
    pub rss: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    /// Centered covariate sum of squares of the fitted subset.
    pub ss_x: f64,
}

impl LinearFit {
    /// Mean squared residual over the fitted subset; this is `ℓ̂(u)`.
    pub fn mean_squared_residual(&self) -> f64 {
        self.rss / self.n_used as f64
    }

    pub fn predict(&self, x: f64) -> f64 {
        self.alpha + self.beta * x
    }
}

/// Suffix least-squares fit at candidate `k`.
pub fn suffix_ls_fit(stats: &SuffixStats, k: usize) -> Result<LinearFit> {
    stats.fit(k)
}

/// Empirical loss `ℓ̂(u)` at candidate `k`, given the fit for that candidate.
pub fn empirical_loss(stats: &SuffixStats, k: usize, fit: &LinearFit) -> Result<f64> {
    let count = stats.moments(k).count;
    if fit.n_used != count {
        return Err(Error::InvalidConfig(format!(
            "fit covers {} observations but candidate {k} has {count}",
            fit.n_used
        )));
    }
    Ok(fit.mean_squared_residual())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn three_point_suffix_sums() {
        let s = Sample::from_pairs(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap();
        let st = SuffixStats::build(&s);
        let m = st.moments(1);
        assert_eq!(m.count, 2);
        assert_eq!(
            (m.sum_x, m.sum_y, m.sum_xx, m.sum_xy, m.sum_yy),
            (5.0, 5.0, 13.0, 13.0, 13.0)
        );
        let all = st.moments(0);
        assert_eq!((all.count, all.sum_x, all.sum_xx), (3, 6.0, 14.0));
    }

    #[test]
    fn ties_collapse_and_counts_decrease() {
        let s = Sample::new(vec![2.0, 1.0, 2.0, 3.0, 1.0], vec![1.0; 5]).unwrap();
        let st = SuffixStats::build(&s);
        assert_eq!(st.values(), &[1.0, 2.0, 3.0]);
        let counts: Vec<usize> = (0..st.len()).map(|k| st.moments(k).count).collect();
        assert_eq!(counts, vec![5, 3, 1]);
        assert_eq!(st.index_at_or_above(1.5), Some(1));
        assert_eq!(st.index_at_or_above(3.5), None);
    }

    #[test]
    fn exact_line_is_recovered() {
        let pts: Vec<(f64, f64)> = (0..12).map(|i| (i as f64 * 0.7, 2.0 * i as f64 * 0.7 + 1.0)).collect();
        let st = SuffixStats::build(&Sample::from_pairs(&pts).unwrap());
        for k in 0..st.len() - 2 {
            let f = suffix_ls_fit(&st, k).unwrap();
            assert!(close(f.alpha, 1.0, 1e-10) && close(f.beta, 2.0, 1e-10));
            assert!(f.rss < 1e-10);
            assert_eq!(empirical_loss(&st, k, &f).unwrap(), f.rss / f.n_used as f64);
        }
    }

    #[test]
    fn four_points_match_normal_equations() {
        // x̄ = 1.5, ȳ = 0.5, Sxx = 5, Sxy = 1  =>  β = 0.2, α = 0.2
        let st = SuffixStats::build(&Sample::from_pairs(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).unwrap());
        let f = st.fit(0).unwrap();
        assert!(close(f.beta, 0.2, 1e-14));
        assert!(close(f.alpha, 0.2, 1e-14));
        // residuals -0.2, 0.6, -0.6, 0.2
        assert!(close(f.rss, 0.8, 1e-14));
    }

    #[test]
    fn degenerate_and_insufficient() {
        let st = SuffixStats::build(
            &Sample::new(vec![0.0, 1.0, 2.0, 5.0, 5.0, 5.0], vec![0.0, 1.0, 0.0, 1.0, 2.0, 3.0]).unwrap(),
        );
        let k5 = st.index_at_or_above(5.0).unwrap();
        assert!(matches!(st.fit(k5), Err(Error::DegenerateDesign { n: 3, .. })));
        let k2 = st.index_at_or_above(2.0).unwrap();
        assert!(st.fit(k2).is_ok());
        assert!(matches!(
            st.fit_with_min(k2, 5),
            Err(Error::InsufficientSuffix {
                available: 4,
                required: 5,
                ..
            })
        ));
    }

    #[test]
    fn constant_response_is_legal() {
        let st = SuffixStats::build(&Sample::new(vec![1.0, 2.0, 3.0, 4.0], vec![7.0; 4]).unwrap());
        let f = st.fit(0).unwrap();
        assert_eq!(f.beta, 0.0);
        assert_eq!(f.alpha, 7.0);
        assert_eq!(f.rss, 0.0);
    }

    #[test]
    fn far_from_origin_stays_accurate() {
        let noisy = |i: usize| if i % 3 == 0 { 0.1 } else { -0.05 };
        let near: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, 3.0 - 0.5 * i as f64 + noisy(i))).collect();
        let far: Vec<(f64, f64)> = near.iter().map(|&(x, y)| (x + 1e4, y)).collect();
        let f_near = SuffixStats::build(&Sample::from_pairs(&near).unwrap()).fit(0).unwrap();
        let f_far = SuffixStats::build(&Sample::from_pairs(&far).unwrap()).fit(0).unwrap();
        assert!(
            close(f_far.beta, f_near.beta, 1e-9),
            "{} vs {}",
            f_far.beta,
            f_near.beta
        );
        assert!(close(f_far.rss, f_near.rss, 1e-6), "{} vs {}", f_far.rss, f_near.rss);
    }
}
