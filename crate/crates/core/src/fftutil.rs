//! Multi-dimensional FFT helpers over flat row-major buffers.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// In-place transform along one axis of a row-major array.
pub(crate) fn fft_axis(values: &mut [Complex64], dims: &[usize], axis: usize, inverse: bool) {
    let n = dims[axis];
    if n == 1 {
        return;
    }
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let stride: usize = dims[axis + 1..].iter().product();
    let outer: usize = dims[..axis].iter().product();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for o in 0..outer {
        for s in 0..stride {
            let base = o * n * stride + s;
            for i in 0..n {
                line[i] = values[base + i * stride];
            }
            fft.process(&mut line);
            for i in 0..n {
                values[base + i * stride] = line[i];
            }
        }
    }
    if inverse {
        let scale = 1.0 / n as f64;
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for i in 0..n {
                    values[base + i * stride] *= scale;
                }
            }
        }
    }
}

/// Forward transform along every axis.
pub(crate) fn fft_nd(values: &mut [Complex64], dims: &[usize]) {
    for axis in 0..dims.len() {
        fft_axis(values, dims, axis, false);
    }
}

/// Inverse (normalized) transform along every axis.
pub(crate) fn ifft_nd(values: &mut [Complex64], dims: &[usize]) {
    for axis in 0..dims.len() {
        fft_axis(values, dims, axis, true);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_2d() {
        let dims = [4usize, 8];
        let mut v: Vec<Complex64> = (0..32)
            .map(|i| Complex64::new(i as f64, (i * i % 7) as f64))
            .collect();
        let orig = v.clone();
        fft_nd(&mut v, &dims);
        ifft_nd(&mut v, &dims);
        for (a, b) in v.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
