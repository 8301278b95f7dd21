//! Discrete and continuous symbols of Calderon-Zygmund convolution operators.
//!
//! The discrete symbol is the lattice sum
//! `sigma_h(xi) = a + sum_{x in h Z^m} exp(-i xi . x) K(x) h^m`,
//! taken as the limit of partial sums over max-norm cubes `Q_N`. The
//! continuous symbol is the principal-value Fourier transform of the kernel
//! with the same `exp(-i xi . x)` convention; for a kernel homogeneous of
//! degree `-m` it depends only on the direction of `xi` and reduces to an
//! angular integral of the density against
//! `-ln|theta . xi/|xi|| - (i pi / 2) sign(theta . xi/|xi|)`.

use num_complex::Complex64;

use crate::error::{CzError, Result};
use crate::fftutil::fft_nd;
use crate::kernel::{KernelFamily, KernelSpec};

/// Truncation schedule for the cube partial sums. Radii are in physical
/// units: the cube at step `h` contains lattice points with
/// `max_k |x_k| <= N`, i.e. integer radius `round(N / h)`.
#[derive(Debug, Clone)]
pub struct PartialSumPlan {
    pub n_schedule: Vec<f64>,
    /// One Richardson step in 1/N on the last two partial sums.
    pub extrapolate: bool,
    /// Non-convergence flag threshold for the last two partial sums.
    pub convergence_tol: f64,
}

impl PartialSumPlan {
    pub fn new(n_schedule: Vec<f64>) -> Result<Self> {
        if n_schedule.len() < 2 {
            return Err(CzError::InvalidInput(
                "truncation schedule needs at least two radii".into(),
            ));
        }
        if n_schedule.windows(2).any(|w| w[1] <= w[0]) || n_schedule[0] <= 0.0 {
            return Err(CzError::InvalidInput(
                "truncation schedule must be positive and strictly increasing".into(),
            ));
        }
        Ok(PartialSumPlan {
            n_schedule,
            extrapolate: false,
            convergence_tol: 1e-2,
        })
    }

    pub fn with_extrapolation(mut self, on: bool) -> Self {
        self.extrapolate = on;
        self
    }

    pub fn largest(&self) -> f64 {
        *self.n_schedule.last().unwrap()
    }
}

#[derive(Debug, Clone)]
pub struct SymbolSample {
    pub xi: Vec<f64>,
    pub value: Complex64,
    pub h: f64,
    /// Physical truncation radius actually used.
    pub n_used: f64,
    pub converged: bool,
    /// Set when the two largest partial sums oscillate instead of settling;
    /// expected at discontinuity points such as xi = 0 for odd kernels.
    pub jump_suspected: bool,
}

#[derive(Debug, Clone)]
pub struct SymbolGrid {
    pub h: f64,
    pub m: usize,
    /// Samples per axis; grid points are `xi_i = -pi/h + (2 pi / h) i / resolution`.
    pub resolution: usize,
    /// Row-major over the m-dimensional index.
    pub values: Vec<Complex64>,
    pub constant_a: Complex64,
    pub n_used: f64,
    /// Per-point convergence flags (same layout as `values`).
    pub converged: Vec<bool>,
}

impl SymbolGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Frequency point of a row-major flat index.
    pub fn xi_at(&self, mut flat: usize) -> Vec<f64> {
        let r = self.resolution;
        let mut idx = vec![0usize; self.m];
        for d in (0..self.m).rev() {
            idx[d] = flat % r;
            flat /= r;
        }
        idx.iter()
            .map(|&i| (-std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / r as f64) / self.h)
            .collect()
    }
}

/// Enumerate one max-norm shell `||z||_inf = s` into `out` as flat chunks of
/// length `m`, representatives only: for each `{z, -z}` pair the one whose
/// first nonzero coordinate is positive.
fn shell_representatives(m: usize, s: i64, out: &mut Vec<i64>) {
    out.clear();
    debug_assert!(s >= 1);
    match m {
        1 => out.push(s),
        2 => {
            for b in -s..=s {
                out.extend_from_slice(&[s, b]);
            }
            for a in 1..s {
                out.extend_from_slice(&[a, s]);
                out.extend_from_slice(&[a, -s]);
            }
            out.extend_from_slice(&[0, s]);
        }
        3 => {
            for b in -s..=s {
                for c in -s..=s {
                    out.extend_from_slice(&[s, b, c]);
                }
            }
            for a in 1..s {
                for b in -s..=s {
                    out.extend_from_slice(&[a, s, b]);
                    out.extend_from_slice(&[a, -s, b]);
                }
                for b in (1 - s)..s {
                    out.extend_from_slice(&[a, b, s]);
                    out.extend_from_slice(&[a, b, -s]);
                }
            }
            for b in -s..=s {
                out.extend_from_slice(&[0, s, b]);
            }
            for a in 1..s {
                out.extend_from_slice(&[0, a, s]);
                out.extend_from_slice(&[0, a, -s]);
            }
            out.extend_from_slice(&[0, 0, s]);
        }
        _ => {
            // slow generic path; fine for the small radii used beyond m = 3
            let mut z = vec![0i64; m];
            enumerate_cube(m, s, 0, &mut z, out);
        }
    }
    debug_assert_eq!(out.len() % m, 0);
}

fn enumerate_cube(m: usize, s: i64, d: usize, z: &mut Vec<i64>, out: &mut Vec<i64>) {
    if d == m {
        if z.iter().map(|v| v.abs()).max().unwrap() == s
            && z.iter().find(|&&v| v != 0).map(|&v| v > 0).unwrap_or(false)
        {
            out.extend_from_slice(z);
        }
        return;
    }
    for v in -s..=s {
        z[d] = v;
        enumerate_cube(m, s, d + 1, z, out);
    }
}

/// Paired shell sum `sum_{||z||_inf = s} K(h z) h^m exp(-i xi . h z)`;
/// opposite lattice points are combined before accumulation.
fn shell_sum(kernel: &KernelSpec, h: f64, xi: &[f64], s: i64, scratch: &mut Vec<i64>) -> Complex64 {
    let m = kernel.dim();
    shell_representatives(m, s, scratch);
    let hm = h.powi(m as i32);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut x = vec![0.0f64; m];
    let mut xneg = vec![0.0f64; m];
    for z in scratch.chunks_exact(m) {
        let mut phase = 0.0f64;
        for d in 0..m {
            x[d] = h * z[d] as f64;
            xneg[d] = -x[d];
            phase += xi[d] * x[d];
        }
        let e = Complex64::from_polar(1.0, -phase);
        acc += kernel.eval(&x) * e + kernel.eval(&xneg) * e.conj();
    }
    acc * hm
}

fn check_in_cube(xi: &[f64], h: f64) -> Result<()> {
    let bound = std::f64::consts::PI / h;
    for &c in xi {
        if !c.is_finite() || c.abs() > bound * (1.0 + 1e-12) {
            return Err(CzError::InvalidInput(format!(
                "frequency component {c} outside [-pi/h, pi/h] = [{:.6}, {:.6}]",
                -bound, bound
            )));
        }
    }
    Ok(())
}

/// `sigma_h(xi)` by cube partial sums at the radii of `plan`.
pub fn discrete_symbol(
    kernel: &KernelSpec,
    a: Complex64,
    h: f64,
    xi: &[f64],
    plan: &PartialSumPlan,
) -> Result<SymbolSample> {
    if xi.len() != kernel.dim() {
        return Err(CzError::ShapeMismatch(format!(
            "xi has {} components, kernel dimension is {}",
            xi.len(),
            kernel.dim()
        )));
    }
    if h <= 0.0 {
        return Err(CzError::InvalidInput("step h must be positive".into()));
    }
    check_in_cube(xi, h)?;

    let radii: Vec<i64> = plan
        .n_schedule
        .iter()
        .map(|n| ((n / h).round() as i64).max(1))
        .collect();

    let mut scratch = Vec::new();
    let mut partials = Vec::with_capacity(radii.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut s = 1i64;
    for &r in &radii {
        while s <= r {
            acc += shell_sum(kernel, h, xi, s, &mut scratch);
            s += 1;
        }
        partials.push(acc);
    }

    let k = partials.len();
    let d_last = (partials[k - 1] - partials[k - 2]).norm();
    let converged = d_last <= plan.convergence_tol;
    let jump_suspected = if k >= 3 {
        let d_prev = (partials[k - 2] - partials[k - 3]).norm();
        !converged && d_last >= 0.5 * d_prev
    } else {
        !converged
    };

    let mut value = partials[k - 1];
    if plan.extrapolate {
        // one Richardson step assuming error ~ C/N
        let (np, nl) = (radii[k - 2] as f64, radii[k - 1] as f64);
        value = (nl * partials[k - 1] - np * partials[k - 2]) / (nl - np);
    }

    Ok(SymbolSample {
        xi: xi.to_vec(),
        value: a + value,
        h,
        n_used: plan.largest(),
        converged,
        jump_suspected,
    })
}

/// Angular weight `int_0^{2pi} exp(i k psi) f(psi) dpsi` for
/// `f(psi) = -ln|cos psi| - (i pi / 2) sign(cos psi)`.
fn angular_weight(k: i64) -> Complex64 {
    use std::f64::consts::PI;
    let ka = k.abs();
    if ka == 0 {
        Complex64::new(2.0 * PI * std::f64::consts::LN_2, 0.0)
    } else if ka % 2 == 0 {
        let j = ka / 2;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(PI * sign / j as f64, 0.0)
    } else {
        let j = (ka - 1) / 2;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(0.0, -2.0 * PI * sign / ka as f64)
    }
}

/// Continuous symbol `a + PV-Fourier(K)(xi)`; homogeneous of degree zero,
/// undefined at the origin.
pub fn continuous_symbol(kernel: &KernelSpec, a: Complex64, xi: &[f64]) -> Result<Complex64> {
    let m = kernel.dim();
    if xi.len() != m {
        return Err(CzError::ShapeMismatch(format!(
            "xi has {} components, kernel dimension is {}",
            xi.len(),
            m
        )));
    }
    let r2: f64 = xi.iter().map(|v| v * v).sum();
    if r2 == 0.0 {
        return Err(CzError::InvalidInput(
            "continuous symbol is undefined at xi = 0 (homogeneous of degree 0)".into(),
        ));
    }
    let r = r2.sqrt();
    let c = kernel.normalization();
    let value = match kernel.family() {
        KernelFamily::Riesz { j } => {
            // classical Riesz multiplier -i xi_j / |xi|
            Complex64::new(0.0, -xi[*j - 1] / r) * c
        }
        KernelFamily::Custom { omega } => match m {
            1 => {
                use std::f64::consts::PI;
                let s = xi[0].signum();
                (omega[1] - omega[0]) * Complex64::new(0.0, -PI / 2.0 * s) * c
            }
            2 => {
                let phi0 = xi[1].atan2(xi[0]);
                let n = omega.len() as i64;
                let mut acc = Complex64::new(0.0, 0.0);
                for k in -(n / 2)..=(n / 2) {
                    let ck = kernel.density_coeff(k);
                    if ck.norm() == 0.0 {
                        continue;
                    }
                    acc += ck * Complex64::from_polar(1.0, k as f64 * phi0) * angular_weight(k);
                }
                acc * c
            }
            _ => {
                return Err(CzError::InvalidInput(
                    "continuous symbol for tabulated densities needs m <= 2".into(),
                ))
            }
        },
    };
    Ok(a + value)
}

/// Evaluate `sigma_h` on the uniform grid of `[-pi/h, pi/h)^m` with
/// `resolution` samples per axis. All grid values come from one padded
/// transform of the kernel samples on the truncation cube: lattice points
/// are folded modulo the grid (with the `(-1)^{sum z}` phase of the
/// `-pi/h` grid origin) and transformed at once.
pub fn sample_symbol_grid(
    kernel: &KernelSpec,
    a: Complex64,
    h: f64,
    resolution: usize,
    plan: &PartialSumPlan,
) -> Result<SymbolGrid> {
    let m = kernel.dim();
    if resolution < 2 || resolution % 2 != 0 {
        return Err(CzError::InvalidInput(
            "grid resolution must be even and >= 2".into(),
        ));
    }
    if h <= 0.0 {
        return Err(CzError::InvalidInput("step h must be positive".into()));
    }
    let r = resolution;
    let total = r.pow(m as u32);
    let dims = vec![r; m];

    let radii: Vec<i64> = plan
        .n_schedule
        .iter()
        .map(|n| ((n / h).round() as i64).max(1))
        .collect();
    let m_prev = radii[radii.len() - 2];
    let m_last = radii[radii.len() - 1];

    let hm = h.powi(m as i32);
    let mut folded = vec![Complex64::new(0.0, 0.0); total];
    let mut scratch = Vec::new();
    let mut x = vec![0.0f64; m];

    let mut fold_shells = |folded: &mut Vec<Complex64>, from: i64, to: i64| {
        for s in from..=to {
            shell_representatives(m, s, &mut scratch);
            for z in scratch.chunks_exact(m) {
                for (d, &zd) in z.iter().enumerate() {
                    x[d] = h * zd as f64;
                }
                let zsum: i64 = z.iter().sum();
                let par = if zsum.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let kv = kernel.eval(&x) * (hm * par);
                let mut flat_p = 0usize;
                let mut flat_n = 0usize;
                for &zd in z.iter() {
                    let jp = zd.rem_euclid(r as i64) as usize;
                    let jn = (-zd).rem_euclid(r as i64) as usize;
                    flat_p = flat_p * r + jp;
                    flat_n = flat_n * r + jn;
                }
                folded[flat_p] += kv;
                for (d, &zd) in z.iter().enumerate() {
                    x[d] = -h * zd as f64;
                }
                folded[flat_n] += kernel.eval(&x) * (hm * par);
            }
        }
    };

    fold_shells(&mut folded, 1, m_prev);
    let mut grid_prev = folded.clone();
    fft_nd(&mut grid_prev, &dims);
    fold_shells(&mut folded, m_prev + 1, m_last);
    let mut grid = folded;
    fft_nd(&mut grid, &dims);

    let mut converged = vec![true; total];
    for i in 0..total {
        converged[i] = (grid[i] - grid_prev[i]).norm() <= plan.convergence_tol;
        grid[i] += a;
    }

    let out = SymbolGrid {
        h,
        m,
        resolution: r,
        values: grid,
        constant_a: a,
        n_used: plan.largest(),
        converged,
    };

    // spot-check periodic closure: the value at +pi/h must match the stored
    // -pi/h sample (the symbol is periodic with the basic cube period)
    if kernel.normalization() != 0.0 {
        let mut xi_probe = out.xi_at(0);
        xi_probe[m - 1] = std::f64::consts::PI / h;
        let direct = discrete_symbol(kernel, a, h, &xi_probe, plan)?;
        let gap = (direct.value - out.values[0]).norm();
        if gap > 1e-9 * (1.0 + out.values[0].norm()) {
            return Err(CzError::InvalidInput(format!(
                "periodic endpoint inconsistency {gap:.3e} on symbol grid"
            )));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub h: f64,
    pub sigma_h: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub xi: Vec<f64>,
    pub sigma_continuous: Complex64,
    pub rows: Vec<ConvergenceRow>,
    pub monotone: bool,
}

/// Tabulates `|sigma_h(xi) - sigma(xi)|` along a decreasing step schedule.
pub fn mesh_convergence_report(
    kernel: &KernelSpec,
    a: Complex64,
    xi: &[f64],
    h_schedule: &[f64],
    plan: &PartialSumPlan,
) -> Result<ConvergenceReport> {
    if h_schedule.is_empty() || h_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CzError::InvalidInput(
            "h schedule must be nonempty and strictly decreasing".into(),
        ));
    }
    let sigma = continuous_symbol(kernel, a, xi)?;
    let mut rows = Vec::with_capacity(h_schedule.len());
    for &h in h_schedule {
        let s = discrete_symbol(kernel, a, h, xi, plan)?;
        rows.push(ConvergenceRow {
            h,
            sigma_h: s.value,
            error: (s.value - sigma).norm(),
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].error < w[0].error);
    Ok(ConvergenceReport {
        xi: xi.to_vec(),
        sigma_continuous: sigma,
        rows,
        monotone,
    })
}
