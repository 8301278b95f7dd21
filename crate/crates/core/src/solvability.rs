//! Winding numbers of symbol slices and solvability diagnostics.
//!
//! For fixed lateral frequency `xi'` the slice curve is the image of
//! `a + sigma(xi', .)` as `xi_m` runs over its range: the periodic segment
//! `[-pi/h, pi/h]` in the discrete case, the compactified line in the
//! continuous case (closed through the common pole value when the
//! transmission condition holds). Unique solvability of the half-space
//! equation is governed by the integer winding of that curve about the
//! origin, and the discrete and continuous windings must agree.

use num_complex::Complex64;

use crate::error::{CzError, Result};
use crate::kernel::KernelSpec;
use crate::phase;
use crate::symbol::{continuous_symbol, discrete_symbol, PartialSumPlan};

pub const TRANSMISSION_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct TransmissionReport {
    pub sigma_south: Complex64,
    pub sigma_north: Complex64,
    pub defect: f64,
    pub passed: bool,
}

/// Compare the continuous symbol at the two poles `(0, ..., 0, -1)` and
/// `(0, ..., 0, +1)`. For `m = 1` the sphere is the pole pair itself and the
/// check compares `sigma(-1)` with `sigma(+1)`.
pub fn transmission_check(kernel: &KernelSpec, a: Complex64) -> Result<TransmissionReport> {
    let m = kernel.dim();
    let mut south = vec![0.0; m];
    let mut north = vec![0.0; m];
    south[m - 1] = -1.0;
    north[m - 1] = 1.0;
    let s = continuous_symbol(kernel, a, &south)?;
    let n = continuous_symbol(kernel, a, &north)?;
    let defect = (s - n).norm();
    Ok(TransmissionReport {
        sigma_south: s,
        sigma_north: n,
        defect,
        passed: defect <= TRANSMISSION_TOL,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum WindingMode {
    Discrete { h: f64 },
    Continuous,
}

#[derive(Debug, Clone)]
pub struct SliceWindingReport {
    pub xi_prime: Vec<f64>,
    pub mode: WindingMode,
    /// Curve samples `a + sigma` along the slice, in traversal order.
    pub samples: Vec<Complex64>,
    /// Unwrapped `arg(a + sigma)` along the slice, including the closure point.
    pub phase_trace: Vec<f64>,
    pub winding: i64,
    /// Distance between the two curve endpoints: ~0 in the discrete case
    /// (periodicity closes the curve), the transmission defect in the
    /// continuous case.
    pub closure_gap: f64,
    pub min_modulus: f64,
}

fn slice_report(
    xi_prime: &[f64],
    mode: WindingMode,
    curve: &[Complex64],
    closure_gap: f64,
) -> Result<SliceWindingReport> {
    let min_modulus = curve.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if min_modulus < 1e-12 {
        return Err(CzError::Ellipticity(format!(
            "a + sigma vanishes on the slice (min modulus {min_modulus:.3e})"
        )));
    }
    let winding = phase::winding_number(curve)?;
    Ok(SliceWindingReport {
        xi_prime: xi_prime.to_vec(),
        mode,
        samples: curve.to_vec(),
        phase_trace: phase::unwrap_args(curve),
        winding,
        closure_gap,
        min_modulus,
    })
}

/// Winding of `a + sigma(xi', .)` over the compactified `xi_m` line.
/// `xi_m = tan(s)` on a uniform open grid of `(-pi/2, pi/2)`; the common
/// pole value closes the curve at infinity, which is exactly what the
/// transmission condition guarantees to be continuous.
pub fn continuous_winding(
    kernel: &KernelSpec,
    a: Complex64,
    xi_prime: &[f64],
    resolution: usize,
) -> Result<SliceWindingReport> {
    let m = kernel.dim();
    if xi_prime.len() != m - 1 {
        return Err(CzError::ShapeMismatch(format!(
            "xi' must have {} components for m = {}",
            m - 1,
            m
        )));
    }
    if m >= 2 && xi_prime.iter().all(|&v| v == 0.0) {
        return Err(CzError::InvalidInput("lateral frequency xi' must be nonzero".into()));
    }
    if resolution < 8 {
        return Err(CzError::InvalidInput("slice resolution must be >= 8".into()));
    }
    let tr = transmission_check(kernel, a)?;
    if !tr.passed {
        return Err(CzError::Ellipticity(format!(
            "transmission condition fails (defect {:.3e}); the continuous slice curve does not close",
            tr.defect
        )));
    }

    let mut curve = Vec::with_capacity(resolution + 2);
    curve.push(tr.sigma_south);
    let mut xi = vec![0.0; m];
    xi[..m - 1].copy_from_slice(xi_prime);
    for i in 0..resolution {
        let s = -std::f64::consts::FRAC_PI_2
            + std::f64::consts::PI * (i as f64 + 1.0) / (resolution as f64 + 1.0);
        xi[m - 1] = s.tan();
        curve.push(continuous_symbol(kernel, a, &xi)?);
    }
    curve.push(tr.sigma_north);
    slice_report(xi_prime, WindingMode::Continuous, &curve, tr.defect)
}

/// Winding of `a + sigma_h(xi', .)` over one period `[-pi/h, pi/h]` of
/// `xi_m`; the curve is closed by periodicity.
pub fn discrete_winding(
    kernel: &KernelSpec,
    a: Complex64,
    h: f64,
    xi_prime: &[f64],
    resolution: usize,
    plan: &PartialSumPlan,
) -> Result<SliceWindingReport> {
    let m = kernel.dim();
    if xi_prime.len() != m - 1 {
        return Err(CzError::ShapeMismatch(format!(
            "xi' must have {} components for m = {}",
            m - 1,
            m
        )));
    }
    if resolution < 8 {
        return Err(CzError::InvalidInput("slice resolution must be >= 8".into()));
    }
    let bound = std::f64::consts::PI / h;
    let mut xi = vec![0.0; m];
    xi[..m - 1].copy_from_slice(xi_prime);
    let mut curve = Vec::with_capacity(resolution + 1);
    for i in 0..=resolution {
        xi[m - 1] = -bound + 2.0 * bound * i as f64 / resolution as f64;
        curve.push(discrete_symbol(kernel, a, h, &xi, plan)?.value);
    }
    let closure_gap = (curve[resolution] - curve[0]).norm();
    // periodicity closes the curve; drop the duplicate endpoint for the cycle
    let report = slice_report(
        xi_prime,
        WindingMode::Discrete { h },
        &curve[..resolution],
        closure_gap,
    )?;
    if closure_gap > 1e-9 * (1.0 + curve[0].norm()) {
        return Err(CzError::WindingUnresolved(format!(
            "periodic closure gap {closure_gap:.3e} on the discrete slice"
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct PairedCoefficient {
    pub sigma_m1: Vec<Complex64>,
    pub sigma_m2: Vec<Complex64>,
    /// Pointwise ratio `G = sigma_M1 / sigma_M2`, the coefficient of the
    /// boundary Riemann problem attached to the paired operator.
    pub ratio: Vec<Complex64>,
}

pub fn paired_coefficient(sigma_m1: &[Complex64], sigma_m2: &[Complex64]) -> Result<PairedCoefficient> {
    if sigma_m1.len() != sigma_m2.len() {
        return Err(CzError::ShapeMismatch(
            "slice sample counts differ".into(),
        ));
    }
    let mut ratio = Vec::with_capacity(sigma_m1.len());
    for (&s1, &s2) in sigma_m1.iter().zip(sigma_m2) {
        if s2.norm() < 1e-12 {
            return Err(CzError::Ellipticity(
                "sigma_M2 vanishes on the slice; coefficient undefined".into(),
            ));
        }
        ratio.push(s1 / s2);
    }
    Ok(PairedCoefficient {
        sigma_m1: sigma_m1.to_vec(),
        sigma_m2: sigma_m2.to_vec(),
        ratio,
    })
}

#[derive(Debug, Clone)]
pub struct AgreementCell {
    pub xi_prime: Vec<f64>,
    pub h: f64,
    pub winding_discrete: std::result::Result<i64, String>,
    pub winding_continuous: std::result::Result<i64, String>,
    pub equal: bool,
}

#[derive(Debug, Clone)]
pub struct MainTheoremReport {
    pub cells: Vec<AgreementCell>,
    pub transmission: TransmissionReport,
    /// True only if every cell resolved and every pair of windings is equal.
    pub agrees: bool,
}

/// Per-(h, xi') table of discrete vs continuous windings. Slice errors are
/// recorded in their cells without aborting the rest of the table.
pub fn main_theorem_report(
    kernel: &KernelSpec,
    a: Complex64,
    h_schedule: &[f64],
    xi_prime_set: &[Vec<f64>],
    resolution: usize,
    plan: &PartialSumPlan,
) -> Result<MainTheoremReport> {
    let tr = transmission_check(kernel, a)?;
    if !tr.passed {
        return Err(CzError::Ellipticity(format!(
            "transmission condition fails (defect {:.3e}); windings are not comparable",
            tr.defect
        )));
    }
    let mut cells = Vec::new();
    let mut agrees = true;
    for xi_prime in xi_prime_set {
        let cont = continuous_winding(kernel, a, xi_prime, 10 * resolution)
            .map(|r| r.winding)
            .map_err(|e| e.to_string());
        for &h in h_schedule {
            let disc = discrete_winding(kernel, a, h, xi_prime, resolution, plan)
                .map(|r| r.winding)
                .map_err(|e| e.to_string());
            let equal = matches!((&disc, &cont), (Ok(d), Ok(c)) if d == c);
            agrees &= equal;
            cells.push(AgreementCell {
                xi_prime: xi_prime.clone(),
                h,
                winding_discrete: disc.clone(),
                winding_continuous: cont.clone(),
                equal,
            });
        }
    }
    Ok(MainTheoremReport {
        cells,
        transmission: tr,
        agrees,
    })
}
