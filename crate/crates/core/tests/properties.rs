// SPDX-License-Identifier: MIT OR Apache-2.0

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn suffix_path_matches_rescan(s in sample_strategy(200)) {
        check_oracle(&s, 1e-9)?;
    }

    #[test]
    fn loss_is_constant_between_candidates(s in sample_strategy(80)) {
        check_piecewise_constant(&s)?;
    }

    #[test]
    fn first_candidate_is_full_sample(s in sample_strategy(200)) {
        check_full_sample(&s)?;
    }

    #[test]
    fn normal_equations_hold(s in sample_strategy(200)) {
        check_normal_equations(&s)?;
    }

    #[test]
    fn affine_response_equivariance(
        s in sample_strategy(150),
        a in -100.0f64..100.0,
        b in prop_oneof![-20.0f64..-0.05, 0.05f64..20.0],
    ) {
        check_equivariance(&s, a, b)?;
    }

    #[test]
    fn unpenalized_argmin_ignores_scale(
        s in sample_strategy(150),
        b in prop_oneof![-8.0f64..-0.125, 0.125f64..8.0],
    ) {
        // Powers of two keep every loss an exact multiple, so ties survive.
        let b = b.signum() * 2f64.powi(b.abs().log2().round() as i32);
        check_scale_invariance(&s, b)?;
    }

    #[test]
    fn estimates_are_deterministic(s in sample_strategy(150), c in 0.0f64..5.0) {
        check_tie_determinism(&s, c)?;
    }

    #[test]
    fn sweep_is_non_increasing(s in sample_strategy(150), grid in c_grid_strategy()) {
        check_monotone_sweep(&s, &grid)?;
    }
}
