// SPDX-License-Identifier: MIT OR Apache-2.0

use crate::error::{Error, Result};

/// Smallest sample the estimator accepts.
pub const MIN_SAMPLE_SIZE: usize = 3;

/// Paired covariate/response observations together with the ascending-x
/// permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    x: Vec<f64>,
    y: Vec<f64>,
    sorted_by_x: Vec<usize>,
}

impl Sample {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidSample(format!(
                "covariate has {} values but response has {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < MIN_SAMPLE_SIZE {
            return Err(Error::InvalidSample(format!(
                "{} observations, need at least {MIN_SAMPLE_SIZE}",
                x.len()
            )));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSample(format!("covariate {i} is not finite ({})", x[i])));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSample(format!("response {i} is not finite ({})", y[i])));
        }
        let mut sorted_by_x: Vec<usize> = (0..x.len()).collect();
        // stable: tied covariates keep input order
        sorted_by_x.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
        Ok(Sample { x, y, sorted_by_x })
    }

    pub fn from_pairs(points: &[(f64, f64)]) -> Result<Self> {
        let (x, y) = points.iter().copied().unzip();
        Sample::new(x, y)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn sorted_by_x(&self) -> &[usize] {
        &self.sorted_by_x
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }

    /// Points in ascending covariate order.
    pub fn sorted_points(&self) -> impl DoubleEndedIterator<Item = (f64, f64)> + '_ {
        self.sorted_by_x.iter().map(|&i| (self.x[i], self.y[i]))
    }

    pub fn min_x(&self) -> f64 {
        self.x[self.sorted_by_x[0]]
    }

    pub fn max_x(&self) -> f64 {
        self.x[self.sorted_by_x[self.len() - 1]]
    }

    /// `k`-th order statistic of the covariate, 1-based.
    pub fn order_statistic(&self, k: usize) -> f64 {
        assert!((1..=self.len()).contains(&k), "order statistic {k} out of range");
        self.x[self.sorted_by_x[k - 1]]
    }

    /// Returns a copy with the responses mapped through `f`.
    pub fn map_y(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Sample::new(self.x.clone(), self.y.iter().map(|&v| f(v)).collect())
    }
}
