//! Dense LU and restarted GMRES for complex systems.
//!
//! Small hand-rolled routines: the dense path is an oracle for boxes of a
//! few thousand unknowns, the Krylov path is matrix-free for the fast
//! operator application.

use num_complex::Complex64;

use crate::error::{CzError, Result};

/// Solve `A x = b` by LU with partial pivoting; `a` is row-major `n x n`
/// and is consumed. Returns `(x, condition_estimate)`.
pub fn lu_solve(mut a: Vec<Complex64>, n: usize, b: &[Complex64]) -> Result<(Vec<Complex64>, f64)> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    let mut x = b.to_vec();
    let mut piv_min = f64::INFINITY;
    let mut piv_max = 0.0f64;
    let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);

    for col in 0..n {
        let (mut best, mut best_row) = (0.0, col);
        for row in col..n {
            let v = a[row * n + col].norm();
            if v > best {
                best = v;
                best_row = row;
            }
        }
        if best < 1e-14 * scale {
            return Err(CzError::Singular(format!(
                "pivot {best:.3e} at column {col} (matrix scale {scale:.3e}, condition >= {:.3e})",
                scale / best.max(1e-300)
            )));
        }
        piv_min = piv_min.min(best);
        piv_max = piv_max.max(best);
        if best_row != col {
            for k in 0..n {
                a.swap(col * n + k, best_row * n + k);
            }
            x.swap(col, best_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            a[row * n + col] = f;
            for k in col + 1..n {
                let v = a[col * n + k];
                a[row * n + k] -= f * v;
            }
            let xc = x[col];
            x[row] -= f * xc;
        }
    }
    for col in (0..n).rev() {
        x[col] /= a[col * n + col];
        let xc = x[col];
        for row in 0..col {
            let f = a[row * n + col];
            x[row] -= f * xc;
        }
    }
    Ok((x, piv_max / piv_min))
}

#[derive(Debug, Clone)]
pub struct GmresOutcome {
    pub x: Vec<Complex64>,
    pub iterations: usize,
    pub rel_residual: f64,
    pub converged: bool,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn nrm2(a: &[Complex64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations;
/// handles non-self-adjoint operators, stops at relative residual `tol`.
pub fn gmres(
    apply: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    b: &[Complex64],
    tol: f64,
    restart: usize,
    max_iter: usize,
) -> GmresOutcome {
    let n = b.len();
    let bnorm = nrm2(b).max(1e-300);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut total_iters = 0usize;

    loop {
        let ax = apply(&x);
        let r0: Vec<Complex64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = nrm2(&r0);
        if beta / bnorm <= tol {
            return GmresOutcome {
                x,
                iterations: total_iters,
                rel_residual: beta / bnorm,
                converged: true,
            };
        }
        if total_iters >= max_iter {
            return GmresOutcome {
                x,
                iterations: total_iters,
                rel_residual: beta / bnorm,
                converged: false,
            };
        }

        let m = restart.min(max_iter - total_iters).max(1);
        let mut basis: Vec<Vec<Complex64>> = vec![r0.iter().map(|v| v / beta).collect()];
        let mut hess = vec![Complex64::new(0.0, 0.0); (m + 1) * m]; // column-major h[i + k*(m+1)]
        let mut gs = vec![beta.into(); 1_usize];
        gs.resize(m + 1, Complex64::new(0.0, 0.0));
        // Givens rows: (c1, c2) first row of each unitary 2x2
        let mut rot: Vec<(Complex64, Complex64)> = Vec::with_capacity(m);
        let mut cols = 0usize;

        for k in 0..m {
            let mut w = apply(&basis[k]);
            for (i, v) in basis.iter().enumerate() {
                let hik = dot(v, &w);
                hess[i + k * (m + 1)] = hik;
                for (wj, vj) in w.iter_mut().zip(v) {
                    *wj -= hik * vj;
                }
            }
            let hkk = nrm2(&w);
            hess[k + 1 + k * (m + 1)] = hkk.into();
            // apply accumulated rotations to the new column
            for (i, &(c1, c2)) in rot.iter().enumerate() {
                let hi = hess[i + k * (m + 1)];
                let hi1 = hess[i + 1 + k * (m + 1)];
                hess[i + k * (m + 1)] = c1 * hi + c2 * hi1;
                hess[i + 1 + k * (m + 1)] = -c2.conj() * hi + c1.conj() * hi1;
            }
            // new rotation annihilating the subdiagonal
            let a = hess[k + k * (m + 1)];
            let bb = hess[k + 1 + k * (m + 1)];
            let r = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            let (c1, c2) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (a.conj() / r, bb.conj() / r)
            };
            hess[k + k * (m + 1)] = r.into();
            hess[k + 1 + k * (m + 1)] = Complex64::new(0.0, 0.0);
            rot.push((c1, c2));
            let gk = gs[k];
            gs[k] = c1 * gk;
            gs[k + 1] = -c2.conj() * gk;
            total_iters += 1;
            cols = k + 1;

            let rel = gs[k + 1].norm() / bnorm;
            if rel <= tol || hkk < 1e-14 || total_iters >= max_iter {
                break;
            }
            basis.push(w.iter().map(|v| v / hkk).collect());
        }

        // back substitution for the least-squares coefficients
        let mut y = vec![Complex64::new(0.0, 0.0); cols];
        for i in (0..cols).rev() {
            let mut s = gs[i];
            for j in i + 1..cols {
                s -= hess[i + j * (m + 1)] * y[j];
            }
            y[i] = s / hess[i + i * (m + 1)];
        }
        for (k, yk) in y.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&basis[k]) {
                *xi += yk * vi;
            }
        }

        let ax = apply(&x);
        let rel = nrm2(
            &b.iter()
                .zip(&ax)
                .map(|(bi, ai)| bi - ai)
                .collect::<Vec<_>>(),
        ) / bnorm;
        if rel <= tol {
            return GmresOutcome {
                x,
                iterations: total_iters,
                rel_residual: rel,
                converged: true,
            };
        }
        if total_iters >= max_iter {
            return GmresOutcome {
                x,
                iterations: total_iters,
                rel_residual: rel,
                converged: false,
            };
        }
    }
}
