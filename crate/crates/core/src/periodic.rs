//! Periodic grid functions on `[-pi, pi]` and their Fourier coefficients.
//!
//! The transform convention is `u_hat(xi) = sum_k u(k) exp(-i k xi)`:
//! the coefficient of index `k` rides on the mode `exp(-i k t)`. Plus
//! functions (analytic continuation into the upper half-strip) carry
//! coefficients `k >= 0`, minus functions `k <= -1`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{CzError, Result};

#[derive(Debug, Clone)]
pub struct PeriodicGrid {
    values: Vec<Complex64>,
}

impl PeriodicGrid {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        let n = values.len();
        if n < 8 || !n.is_power_of_two() {
            return Err(CzError::InvalidInput(format!(
                "grid size {n} must be a power of two >= 8"
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(CzError::InvalidInput("grid values must be finite".into()));
        }
        Ok(PeriodicGrid { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = (0..n).map(|j| f(t_node(n, j))).collect();
        Self::new(values)
    }

    /// Grid from Fourier coefficients indexed by signed `k`.
    pub fn from_coeffs(coeffs: &[Complex64]) -> Result<Self> {
        let v = values_from_coeffs(coeffs);
        Self::new(v)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn t_at(&self, j: usize) -> f64 {
        t_node(self.values.len(), j)
    }

    /// Fourier coefficients, array index `p` holding signed
    /// `k = p` for `p < n/2` and `k = p - n` otherwise.
    pub fn coeffs(&self) -> Vec<Complex64> {
        coeffs_from_values(&self.values)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> PeriodicGrid {
        PeriodicGrid {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip(&self, other: &PeriodicGrid, f: impl Fn(Complex64, Complex64) -> Complex64) -> PeriodicGrid {
        assert_eq!(self.len(), other.len(), "grid size mismatch");
        PeriodicGrid {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn max_norm_diff(&self, other: &PeriodicGrid) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min)
    }
}

pub fn t_node(n: usize, j: usize) -> f64 {
    -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / n as f64
}

/// Signed frequency of array slot `p` on a size-`n` grid.
pub fn signed_freq(n: usize, p: usize) -> i64 {
    if p < n / 2 {
        p as i64
    } else {
        p as i64 - n as i64
    }
}

/// Values at the nodes `t_j = -pi + 2 pi j / n` of `sum_k c_k exp(-i k t)`.
pub fn values_from_coeffs(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    // exp(-i k t_j) = (-1)^p exp(-2 pi i p j / n) with p = k mod n
    let mut buf: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(p, &c)| if p % 2 == 0 { c } else { -c })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf
}

pub fn coeffs_from_values(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for (p, v) in buf.iter_mut().enumerate() {
        *v *= if p % 2 == 0 { scale } else { -scale };
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coeff_roundtrip_on_modes() {
        let n = 16;
        for k in [-7i64, -1, 0, 1, 5] {
            let g = PeriodicGrid::from_fn(n, |t| Complex64::from_polar(1.0, -(k as f64) * t)).unwrap();
            let c = g.coeffs();
            for p in 0..n {
                let expect = if signed_freq(n, p) == k { 1.0 } else { 0.0 };
                assert!(
                    (c[p] - Complex64::new(expect, 0.0)).norm() < 1e-12,
                    "k={k}, p={p}: {}",
                    c[p]
                );
            }
            let back = values_from_coeffs(&c);
            for (a, b) in back.iter().zip(g.values()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(PeriodicGrid::new(vec![Complex64::new(1.0, 0.0); 12]).is_err());
        assert!(PeriodicGrid::new(vec![Complex64::new(1.0, 0.0); 4]).is_err());
    }

    #[test]
    fn nodes_cover_half_open_period() {
        let g = PeriodicGrid::from_fn(8, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert!((g.t_at(0) + std::f64::consts::PI).abs() < 1e-15);
        assert!((g.t_at(4)).abs() < 1e-15);
    }
}
