// SPDX-License-Identifier: MIT OR Apache-2.0

//! The regression family used in the Monte Carlo study: a cubic `g` on
//! `[0, 1]` below the threshold and its tangent line, tilted by `δ`, above.

use crate::error::{Error, Result};

const UNIT: &str = "[0, 1]";

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain { value: x, domain: UNIT })
    }
}

/// `g(x) = 4x²(3 − 4x)` on `[0, 0.5]`, `(4/3)·x·(4x² − 10x + 7) − 1` on `[0.5, 1]`.
pub fn g(x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(if x <= 0.5 {
        4.0 * x * x * (3.0 - 4.0 * x)
    } else {
        4.0 / 3.0 * x * (4.0 * x * x - 10.0 * x + 7.0) - 1.0
    })
}

/// `g′(x)`: `24x − 48x²` on the left branch, `(4/3)(12x² − 20x + 7)` on the
/// right. Both vanish at 0.5.
pub fn g_prime(x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(if x <= 0.5 {
        24.0 * x - 48.0 * x * x
    } else {
        4.0 / 3.0 * (12.0 * x * x - 20.0 * x + 7.0)
    })
}

/// Coefficients `(a, b)` of the linear piece `a + b·x` that `r_{u0,δ}`
/// follows above `u0`.
pub fn linear_piece(u0: f64, delta: f64) -> Result<(f64, f64)> {
    check_threshold(u0)?;
    let b = g_prime(u0)? + delta;
    Ok((g(u0)? - b * u0, b))
}

fn check_threshold(u0: f64) -> Result<()> {
    if u0 > 0.0 && u0 < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            value: u0,
            domain: "(0, 1)",
        })
    }
}

/// `r_{u0,δ}(x)`: `g(x)` for `x ≤ u0`, `{g′(u0) + δ}(x − u0) + g(u0)` above.
pub fn r_threshold(x: f64, u0: f64, delta: f64) -> Result<f64> {
    check_unit(x)?;
    check_threshold(u0)?;
    if x <= u0 {
        g(x)
    } else {
        Ok((g_prime(u0)? + delta) * (x - u0) + g(u0)?)
    }
}
