//! Calderon-Zygmund convolution kernels.
//!
//! A kernel is homogeneous of degree `-m`, has zero mean over the unit
//! sphere and is written `K(x) = Omega(x/|x|) / |x|^m`. The spherical
//! density is either the Riesz family `c_m x_j / |x|^{m+1}` or a tabulated
//! density: a `(Omega(-1), Omega(+1))` pair for `m = 1`, equispaced angle
//! samples with trigonometric interpolation for `m = 2`.

use num_complex::Complex64;

use crate::error::{CzError, Result};

const MEAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily {
    /// `K_j(x) = c_m x_j / |x|^{m+1}` with `c_m = Gamma((m+1)/2) / pi^{(m+1)/2}`.
    Riesz { j: usize },
    /// Tabulated spherical density.
    Custom { omega: Vec<Complex64> },
}

#[derive(Debug, Clone)]
pub struct KernelSpec {
    m: usize,
    family: KernelFamily,
    normalization: f64,
    /// Fourier coefficients of the density for m = 2 custom kernels,
    /// index k in [-n/2, n/2), stored k mod n.
    omega_coeffs: Vec<Complex64>,
}

/// `Gamma(n/2)` for positive integer `n`, by the recursion from
/// `Gamma(1/2) = sqrt(pi)` and `Gamma(1) = 1`.
fn gamma_half_integer(n: u32) -> f64 {
    assert!(n >= 1);
    if n == 1 {
        return std::f64::consts::PI.sqrt();
    }
    if n == 2 {
        return 1.0;
    }
    (n as f64 / 2.0 - 1.0) * gamma_half_integer(n - 2)
}

/// Normalization of the Riesz kernel, `Gamma((m+1)/2) / pi^{(m+1)/2}`.
pub fn riesz_constant(m: usize) -> f64 {
    let p = (m as f64 + 1.0) / 2.0;
    gamma_half_integer(m as u32 + 1) / std::f64::consts::PI.powf(p)
}

fn dft_coeffs(samples: &[Complex64]) -> Vec<Complex64> {
    // plain O(n^2) transform; density tables are small
    let n = samples.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (k, c) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &s) in samples.iter().enumerate() {
            let ang = -2.0 * std::f64::consts::PI * (k as f64) * (j as f64) / (n as f64);
            acc += s * Complex64::from_polar(1.0, ang);
        }
        *c = acc / n as f64;
    }
    out
}

impl KernelSpec {
    pub fn riesz(m: usize, j: usize) -> Result<Self> {
        Self::new(m, KernelFamily::Riesz { j }, 1.0)
    }

    /// Kernel that is identically zero (normalization constant 0).
    pub fn zero(m: usize) -> Self {
        Self::new(m, KernelFamily::Riesz { j: 1 }, 0.0).expect("riesz(1) is always valid")
    }

    /// For m = 1 `omega` is the pair `(Omega(-1), Omega(+1))`; for m = 2 it
    /// holds samples at the equispaced angles `2*pi*l/n`.
    pub fn custom(m: usize, omega: Vec<Complex64>, normalization: f64) -> Result<Self> {
        Self::new(m, KernelFamily::Custom { omega }, normalization)
    }

    pub fn new(m: usize, family: KernelFamily, normalization: f64) -> Result<Self> {
        if m < 1 {
            return Err(CzError::InvalidInput("dimension must be >= 1".into()));
        }
        if !normalization.is_finite() {
            return Err(CzError::InvalidInput("normalization must be finite".into()));
        }
        let mut spec = KernelSpec {
            m,
            family,
            normalization,
            omega_coeffs: Vec::new(),
        };
        match &spec.family {
            KernelFamily::Riesz { j } => {
                if *j < 1 || *j > m {
                    return Err(CzError::InvalidInput(format!(
                        "riesz component j = {} outside 1..={}",
                        j, m
                    )));
                }
            }
            KernelFamily::Custom { omega } => {
                if omega.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
                    return Err(CzError::InvalidInput(
                        "density samples must be finite".into(),
                    ));
                }
                match m {
                    1 => {
                        if omega.len() != 2 {
                            return Err(CzError::InvalidInput(
                                "m = 1 density is the pair (Omega(-1), Omega(+1))".into(),
                            ));
                        }
                    }
                    2 => {
                        if omega.len() < 4 {
                            return Err(CzError::InvalidInput(
                                "m = 2 density needs at least 4 angle samples".into(),
                            ));
                        }
                        spec.omega_coeffs = dft_coeffs(omega);
                    }
                    _ => {
                        return Err(CzError::InvalidInput(
                            "tabulated densities are supported for m in {1, 2}; use riesz for higher dimensions"
                                .into(),
                        ));
                    }
                }
                let mean = spec.spherical_mean(1);
                if mean.norm() > MEAN_TOL {
                    return Err(CzError::NonzeroMean {
                        mean: mean.norm(),
                        tol: MEAN_TOL,
                    });
                }
            }
        }
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn family(&self) -> &KernelFamily {
        &self.family
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn with_normalization(mut self, c: f64) -> Self {
        self.normalization = c;
        self
    }

    /// Whether the density takes genuinely complex values (flagged in reports).
    pub fn has_complex_density(&self) -> bool {
        match &self.family {
            KernelFamily::Riesz { .. } => false,
            KernelFamily::Custom { omega } => omega.iter().any(|w| w.im.abs() > 0.0),
        }
    }

    /// Density at a unit direction. For m = 2 the direction is given by its
    /// angle; trigonometric interpolation of the tabulated samples.
    pub fn density_at(&self, theta: &[f64]) -> Complex64 {
        match &self.family {
            KernelFamily::Riesz { j } => {
                Complex64::new(riesz_constant(self.m) * theta[*j - 1], 0.0)
            }
            KernelFamily::Custom { omega } => match self.m {
                1 => {
                    if theta[0] > 0.0 {
                        omega[1]
                    } else {
                        omega[0]
                    }
                }
                2 => {
                    let phi = theta[1].atan2(theta[0]);
                    self.density_at_angle(phi)
                }
                _ => unreachable!("custom densities only exist for m <= 2"),
            },
        }
    }

    /// m = 2 only: trigonometric interpolant of the density at angle `phi`.
    pub fn density_at_angle(&self, phi: f64) -> Complex64 {
        let n = self.omega_coeffs.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..n {
            let k = if p <= n / 2 { p as i64 } else { p as i64 - n as i64 };
            // real-axis Nyquist split keeps real densities real
            let c = if n % 2 == 0 && p == n / 2 {
                self.omega_coeffs[p] / 2.0
            } else {
                self.omega_coeffs[p]
            };
            acc += c * Complex64::from_polar(1.0, k as f64 * phi);
            if n % 2 == 0 && p == n / 2 {
                acc += c * Complex64::from_polar(1.0, -(k as f64) * phi);
            }
        }
        acc
    }

    /// Fourier coefficient `c_k` of the m = 2 density (zero outside the table).
    pub fn density_coeff(&self, k: i64) -> Complex64 {
        let n = self.omega_coeffs.len() as i64;
        match &self.family {
            KernelFamily::Riesz { j } => {
                // c_m * cos(phi) or c_m * sin(phi)
                let c = riesz_constant(self.m);
                match (*j, k) {
                    (1, 1) | (1, -1) => Complex64::new(c / 2.0, 0.0),
                    (2, 1) => Complex64::new(0.0, -c / 2.0),
                    (2, -1) => Complex64::new(0.0, c / 2.0),
                    _ => Complex64::new(0.0, 0.0),
                }
            }
            KernelFamily::Custom { .. } => {
                if k <= -n / 2 || k > n / 2 {
                    return Complex64::new(0.0, 0.0);
                }
                let p = k.rem_euclid(n) as usize;
                if n % 2 == 0 && p == (n / 2) as usize {
                    self.omega_coeffs[p] / 2.0
                } else {
                    self.omega_coeffs[p]
                }
            }
        }
    }

    /// Quadrature of the density over the sphere; `oversample` refines the
    /// m = 2 angular grid by that factor (through the interpolant).
    pub fn spherical_mean(&self, oversample: usize) -> Complex64 {
        match &self.family {
            KernelFamily::Riesz { .. } => Complex64::new(0.0, 0.0),
            KernelFamily::Custom { omega } => match self.m {
                1 => omega[0] + omega[1],
                2 => {
                    let n = omega.len() * oversample.max(1);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for l in 0..n {
                        let phi = 2.0 * std::f64::consts::PI * l as f64 / n as f64;
                        acc += self.density_at_angle(phi);
                    }
                    acc * (2.0 * std::f64::consts::PI / n as f64)
                }
                _ => unreachable!(),
            },
        }
    }

    /// `K(x) = normalization * Omega(x/|x|) / |x|^m`, with `K(0) = 0`.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.m, "point dimension mismatch");
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let r = r2.sqrt();
        let theta: Vec<f64> = x.iter().map(|v| v / r).collect();
        self.density_at(&theta) * (self.normalization / r.powi(self.m as i32))
    }
}
