// SPDX-License-Identifier: MIT OR Apache-2.0

//! The bundled air-quality reproduction: ozone against wind speed on the
//! 111 complete cases.

use crate::io::{read_csv_str, Dataset, DatasetSpec};
use crate::penalty::{PenaltyConfig, PenaltyFn};

/// Contents of `data/airquality.csv`.
pub const CSV: &str = include_str!("../data/airquality.csv");

pub const X_COLUMN: &str = "Wind";
pub const Y_COLUMN: &str = "Ozone";

pub fn dataset() -> Dataset {
    let spec = DatasetSpec {
        na_markers: vec!["NA".to_string()],
        ..DatasetSpec::new("airquality.csv", X_COLUMN, Y_COLUMN)
    };
    read_csv_str(CSV, &spec).expect("bundled fixture parses")
}

/// `η₁ = 0.02`, `ξ = 0.4`, `f(u) = max(u, 0)`.
pub fn config(c: f64) -> PenaltyConfig {
    PenaltyConfig {
        c,
        xi: 0.4,
        penalty_fn: PenaltyFn::PositivePart,
        shift: Some(0.0),
        eta1: 0.02,
        min_suffix: None,
    }
}

/// `c` from 0 to 500: steps of 0.001 up to 10, 0.01 up to 150, 0.1 up
/// to 500. Values are computed as integer ratios so each equals its
/// decimal literal.
pub fn c_grid() -> Vec<f64> {
    let fine = (0..=10_000).map(|i| i as f64 / 1000.0);
    let mid = (1_001..=15_000).map(|i| i as f64 / 100.0);
    let coarse = (1_501..=5_000).map(|i| i as f64 / 10.0);
    fine.chain(mid).chain(coarse).collect()
}

/// Offset used for the final refit.
pub const PSI: f64 = 1.0;
