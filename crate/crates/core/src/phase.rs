//! Phase unwrapping and winding counts for closed complex curves.

use num_complex::Complex64;

use crate::error::{CzError, Result};

/// How far the accumulated argument variation may sit from an integer
/// multiple of 2 pi before a winding is declared unresolved.
pub const WINDING_SLACK: f64 = 0.05;

/// Unwrapped argument trace: `arg(v[0])` continued along the sequence with
/// branch jumps larger than pi corrected.
pub fn unwrap_args(values: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    if values.is_empty() {
        return out;
    }
    let mut prev = values[0];
    let mut acc = prev.arg();
    out.push(acc);
    for &v in &values[1..] {
        // principal increment lies in (-pi, pi], which is exactly the
        // branch-jump correction
        acc += (v / prev).arg();
        prev = v;
        out.push(acc);
    }
    out
}

/// Winding number of the closed curve through `values` (the segment from the
/// last sample back to the first is included). Errors when the curve passes
/// too close to the origin or the variation is not near an integer.
pub fn winding_number(values: &[Complex64]) -> Result<i64> {
    let total = cyclic_arg_variation(values)?;
    let w = total / (2.0 * std::f64::consts::PI);
    let k = w.round();
    if (w - k).abs() > WINDING_SLACK {
        return Err(CzError::WindingUnresolved(format!(
            "argument variation {:.6} x 2pi is not within {WINDING_SLACK} of an integer",
            w
        )));
    }
    Ok(k as i64)
}

/// Total argument variation along the closed polyline, in radians.
pub fn cyclic_arg_variation(values: &[Complex64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(CzError::InvalidInput("need at least two samples".into()));
    }
    let mut total = 0.0;
    for i in 0..values.len() {
        let a = values[i];
        let b = values[(i + 1) % values.len()];
        if a.norm() < 1e-12 || b.norm() < 1e-12 {
            return Err(CzError::WindingUnresolved(
                "curve passes through (or within 1e-12 of) the origin".into(),
            ));
        }
        total += (b / a).arg();
    }
    Ok(total)
}
