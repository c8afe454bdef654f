// SPDX-License-Identifier: MIT OR Apache-2.0

use linthresh::Error;

pub const DEFAULT_GRID: &str = "0:0.001:10,10.01:0.01:150,150.1:0.1:500";

/// Parses comma-separated `start:step:end` segments. When `1/step` is an
/// integer the points are formed as `k / (1/step)`, so decimal grids hit
/// their literal values exactly.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = |msg: String| Error::InvalidConfig(format!("grid `{spec}`: {msg}"));
    let mut out = Vec::new();
    for segment in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<f64> = segment
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad(format!("cannot parse segment `{segment}`")))?;
        let [start, step, end] = parts[..] else {
            return Err(bad(format!("segment `{segment}` is not start:step:end")));
        };
        if !(start.is_finite() && end.is_finite() && step.is_finite() && step > 0.0 && end >= start) {
            return Err(bad(format!("segment `{segment}` needs step > 0 and end >= start")));
        }
        let count = ((end - start) / step + 1e-9).floor() as u64;
        if count > 10_000_000 {
            return Err(bad(format!("segment `{segment}` has too many points")));
        }
        let inv = 1.0 / step;
        let exact = (inv - inv.round()).abs() < 1e-9 && inv.round() >= 1.0;
        let base = (start * inv).round();
        let exact = exact && (start * inv - base).abs() < 1e-6;
        for k in 0..=count {
            out.push(if exact {
                (base + k as f64) / inv.round()
            } else {
                start + k as f64 * step
            });
        }
    }
    Ok(out)
}
