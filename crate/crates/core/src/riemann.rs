//! Periodic Riemann boundary problem on `[-pi, pi]`.
//!
//! Find `Phi^+`, `Phi^-` with analytic continuations into the upper and
//! lower half-strips whose boundary values satisfy
//! `Phi^+(t) = G(t) Phi^-(t) + g(t)`. In coefficient terms `Phi^+` carries
//! Fourier coefficients `k >= 0` and `Phi^-` carries `k <= -1`; the plus
//! projection is coefficient truncation, equivalently the Sokhotskii form
//! built from the periodic cotangent kernel. Solvability is governed by the
//! index `(1/2pi) int d arg G`.

use num_complex::Complex64;

use crate::error::{CzError, Result};
use crate::periodic::{signed_freq, PeriodicGrid};
use crate::phase;

/// Plus projection by coefficient truncation: keep `k >= 0` (0 is in Z_+).
pub fn project_plus_coeff(u_hat: &PeriodicGrid) -> PeriodicGrid {
    let n = u_hat.len();
    let mut c = u_hat.coeffs();
    for (p, v) in c.iter_mut().enumerate() {
        if signed_freq(n, p) < 0 {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    PeriodicGrid::from_coeffs(&c).expect("size preserved")
}

/// Plus projection in the Sokhotskii form:
/// `u_hat/2 + (1/4pi) int u_hat dt + (1/4pi i) PV int u_hat(t) cot((xi-t)/2) dt`.
///
/// The principal-value integral acts on the mode `exp(-i k t)` as the exact
/// multiplier `2 pi i sgn(k)` (sgn 0 = 0), so each term is evaluated
/// spectrally; no regularizing parameter is needed.
pub fn project_plus_cot(u_hat: &PeriodicGrid) -> PeriodicGrid {
    let n = u_hat.len();
    let c = u_hat.coeffs();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (p, v) in out.iter_mut().enumerate() {
        let k = signed_freq(n, p);
        // u_hat/2
        let mut acc = c[p] * 0.5;
        // (1/4pi) int u_hat dt = c_0 / 2, the k = 0 Fourier contribution
        if k == 0 {
            acc += c[p] * 0.5;
        }
        // (1/4pi i) PV-cot term: multiplier sgn(k)/2 on the mode
        acc += c[p] * 0.5 * (k.signum() as f64);
        *v = acc;
    }
    PeriodicGrid::from_coeffs(&out).expect("size preserved")
}

/// Minus projection, the complement `u_hat - P_+ u_hat` (coefficients k <= -1).
pub fn project_minus(u_hat: &PeriodicGrid) -> PeriodicGrid {
    let plus = project_plus_coeff(u_hat);
    u_hat.zip(&plus, |a, b| a - b)
}

/// Index `(1/2pi) int d arg G(t)` of a nonvanishing coefficient.
pub fn compute_index(g: &PeriodicGrid) -> Result<i64> {
    if g.min_modulus() < 1e-12 {
        return Err(CzError::WindingUnresolved(
            "coefficient modulus below 1e-12 somewhere on the grid".into(),
        ));
    }
    phase::winding_number(g.values())
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub x_plus: PeriodicGrid,
    pub x_minus: PeriodicGrid,
    pub kappa: i64,
}

impl Factorization {
    /// Largest modulus among the coefficients each factor must not have:
    /// `k < 0` in `log X_+`, `k > 0` in `log X_-`.
    pub fn analyticity_defect(&self) -> f64 {
        let n = self.x_plus.len();
        let lp = log_unwrapped(&self.x_plus).expect("factor is nonvanishing");
        let lm = log_unwrapped(&self.x_minus).expect("factor is nonvanishing");
        let mut worst = 0.0f64;
        for (p, c) in lp.coeffs().iter().enumerate() {
            if signed_freq(n, p) < 0 {
                worst = worst.max(c.norm());
            }
        }
        for (p, c) in lm.coeffs().iter().enumerate() {
            if signed_freq(n, p) > 0 {
                worst = worst.max(c.norm());
            }
        }
        worst
    }
}

/// Continuous-branch logarithm along the grid; requires winding zero.
fn log_unwrapped(g: &PeriodicGrid) -> Result<PeriodicGrid> {
    let args = phase::unwrap_args(g.values());
    let vals: Vec<Complex64> = g
        .values()
        .iter()
        .zip(&args)
        .map(|(v, &a)| Complex64::new(v.norm().ln(), a))
        .collect();
    PeriodicGrid::new(vals)
}

/// Canonical factorization `G = X_+ X_-` for an index-zero coefficient;
/// the constant coefficient of `log G` is assigned to `X_+`.
pub fn factorize(g: &PeriodicGrid) -> Result<Factorization> {
    let kappa = compute_index(g)?;
    if kappa != 0 {
        return Err(CzError::NonzeroIndex {
            kappa,
            xi_prime: None,
        });
    }
    let lo = g.min_modulus();
    let hi = g.max_norm();
    if hi / lo > 1e12 {
        return Err(CzError::Singular(format!(
            "log branch unreliable: coefficient dynamic range {:.3e}",
            hi / lo
        )));
    }
    let log_g = log_unwrapped(g)?;
    let lp = project_plus_coeff(&log_g);
    let lm = log_g.zip(&lp, |a, b| a - b);
    Ok(Factorization {
        x_plus: lp.map(|v| v.exp()),
        x_minus: lm.map(|v| v.exp()),
        kappa: 0,
    })
}

#[derive(Debug, Clone)]
pub struct RiemannProblem {
    pub coefficient: PeriodicGrid,
    pub rhs: PeriodicGrid,
    pub kappa: i64,
}

impl RiemannProblem {
    pub fn new(coefficient: PeriodicGrid, rhs: PeriodicGrid) -> Result<Self> {
        if coefficient.len() != rhs.len() {
            return Err(CzError::ShapeMismatch(
                "coefficient and right-hand side grids differ in size".into(),
            ));
        }
        let kappa = compute_index(&coefficient)?;
        Ok(RiemannProblem {
            coefficient,
            rhs,
            kappa,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RiemannSolution {
    pub phi_plus: PeriodicGrid,
    pub phi_minus: PeriodicGrid,
    /// Max-norm of `Phi^+ - G Phi^- - g`, recomputed pointwise.
    pub residual_max: f64,
}

/// Solve the index-zero periodic Riemann problem. For `kappa != 0` the
/// solvability conditions are defined by the index and no solution is
/// produced; the error carries `kappa` (kernel/cokernel dimension `|kappa|`).
pub fn solve_riemann(p: &RiemannProblem) -> Result<RiemannSolution> {
    if p.kappa != 0 {
        return Err(CzError::NonzeroIndex {
            kappa: p.kappa,
            xi_prime: None,
        });
    }
    let f = factorize(&p.coefficient)?;
    // w = g / X_+; Phi^+ = X_+ P_+ w, Phi^- = -P_- w / X_-
    let w = p.rhs.zip(&f.x_plus, |g, xp| g / xp);
    let wp = project_plus_coeff(&w);
    let wm = w.zip(&wp, |a, b| a - b);
    let phi_plus = f.x_plus.zip(&wp, |xp, v| xp * v);
    let phi_minus = f.x_minus.zip(&wm, |xm, v| -v / xm);
    let residual_max = (0..p.coefficient.len())
        .map(|j| {
            (phi_plus.values()[j]
                - p.coefficient.values()[j] * phi_minus.values()[j]
                - p.rhs.values()[j])
                .norm()
        })
        .fold(0.0, f64::max);
    Ok(RiemannSolution {
        phi_plus,
        phi_minus,
        residual_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::t_node;

    const N: usize = 256;

    fn mode(k: i64) -> PeriodicGrid {
        PeriodicGrid::from_fn(N, |t| Complex64::from_polar(1.0, -(k as f64) * t)).unwrap()
    }

    #[test]
    fn plus_projection_on_delta_modes() {
        // u = delta_0 -> u_hat = 1 -> kept (0 is in Z_+)
        let g = project_plus_coeff(&mode(0));
        assert!(g.max_norm_diff(&mode(0)) < 1e-12);
        // u = delta_1 -> e^{-i xi} kept
        let g = project_plus_coeff(&mode(1));
        assert!(g.max_norm_diff(&mode(1)) < 1e-12);
        // u = delta_{-1} -> e^{i xi} killed
        let g = project_plus_coeff(&mode(-1));
        assert!(g.max_norm() < 1e-12);
    }

    #[test]
    fn cotangent_form_on_delta_modes() {
        let g = project_plus_cot(&mode(0));
        assert!(g.max_norm_diff(&mode(0)) < 1e-12);
        let g = project_plus_cot(&mode(1));
        assert!(g.max_norm_diff(&mode(1)) < 1e-12);
        let g = project_plus_cot(&mode(-1));
        assert!(g.max_norm() < 1e-12);
    }

    #[test]
    fn minus_projection_examples() {
        let g = project_minus(&mode(-1));
        assert!(g.max_norm_diff(&mode(-1)) < 1e-12);
        let g = project_minus(&mode(0));
        assert!(g.max_norm() < 1e-12);
    }

    fn random_trig_poly(rng: &mut impl rand::Rng, degree: i64) -> PeriodicGrid {
        let mut c = vec![Complex64::new(0.0, 0.0); N];
        for p in 0..N {
            let k = signed_freq(N, p);
            if k.abs() <= degree {
                c[p] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        PeriodicGrid::from_coeffs(&c).unwrap()
    }

    #[test]
    fn projection_identities_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let u = random_trig_poly(&mut rng, (N as i64) / 4);
            let plus = project_plus_coeff(&u);
            let cot = project_plus_cot(&u);
            let minus = project_minus(&u);
            // agreement of the two plus routes
            assert!(plus.max_norm_diff(&cot) <= 1e-10);
            // complementarity
            let sum = plus.zip(&minus, |a, b| a + b);
            assert!(sum.max_norm_diff(&u) <= 1e-12);
            // idempotence and annihilation
            assert!(project_plus_coeff(&plus).max_norm_diff(&plus) <= 1e-12);
            assert!(project_plus_coeff(&minus).max_norm() <= 1e-12);
        }
    }

    #[test]
    fn index_examples() {
        let one = PeriodicGrid::from_fn(N, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(compute_index(&one).unwrap(), 0);
        let loop1 = PeriodicGrid::from_fn(N, |t| Complex64::from_polar(1.0, t)).unwrap();
        assert_eq!(compute_index(&loop1).unwrap(), 1);
        let ratio = PeriodicGrid::from_fn(N, |t| {
            let up = Complex64::new(2.0, 0.0) + Complex64::from_polar(1.0, t);
            let dn = Complex64::new(2.0, 0.0) + Complex64::from_polar(1.0, -t);
            up / dn
        })
        .unwrap();
        assert_eq!(compute_index(&ratio).unwrap(), 0);
    }

    #[test]
    fn index_additivity() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let g1 = PeriodicGrid::from_fn(N, |t| {
            Complex64::from_polar(1.0, 2.0 * t) * (Complex64::new(3.0, 0.0) + Complex64::from_polar(1.0, -t))
        })
        .unwrap();
        // damp and shift so the curve stays away from the origin
        let g2 = random_trig_poly(&mut rng, 3).map(|v| v * 0.3 + Complex64::new(8.0, 0.0));
        let prod = g1.zip(&g2, |a, b| a * b);
        assert_eq!(
            compute_index(&prod).unwrap(),
            compute_index(&g1).unwrap() + compute_index(&g2).unwrap()
        );
    }

    #[test]
    fn vanishing_coefficient_rejected() {
        let g = PeriodicGrid::from_fn(N, |t| Complex64::new(t, 0.0)).unwrap();
        assert!(compute_index(&g).is_err());
    }

    #[test]
    fn factorize_constant() {
        let one = PeriodicGrid::from_fn(N, |_| Complex64::new(1.0, 0.0)).unwrap();
        let f = factorize(&one).unwrap();
        assert!(f.x_plus.max_norm_diff(&one) < 1e-12);
        assert!(f.x_minus.max_norm_diff(&one) < 1e-12);
    }

    #[test]
    fn factorize_plus_type_coefficient() {
        // G = 2 + e^{-it}: log G has only k >= 0 coefficients
        let g = PeriodicGrid::from_fn(N, |t| {
            Complex64::new(2.0, 0.0) + Complex64::from_polar(1.0, -t)
        })
        .unwrap();
        let f = factorize(&g).unwrap();
        assert!(f.x_plus.max_norm_diff(&g) < 1e-10);
        let one = PeriodicGrid::from_fn(N, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(f.x_minus.max_norm_diff(&one) < 1e-10);
        assert!(f.analyticity_defect() < 1e-9);
    }

    fn random_index0_coefficient(rng: &mut impl rand::Rng) -> PeriodicGrid {
        // sup of the damped polynomial stays below the shift, so the curve
        // cannot reach the origin and the index is 0
        random_trig_poly(rng, 4).map(|v| v * 0.3 + Complex64::new(6.0, 0.0))
    }

    #[test]
    fn factorization_round_trip_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let g = random_index0_coefficient(&mut rng);
            if compute_index(&g).unwrap() != 0 {
                continue;
            }
            let f = factorize(&g).unwrap();
            let prod = f.x_plus.zip(&f.x_minus, |a, b| a * b);
            let rel = (0..N)
                .map(|j| (prod.values()[j] - g.values()[j]).norm() / g.values()[j].norm())
                .fold(0.0, f64::max);
            assert!(rel < 1e-9, "relative defect {rel}");
            assert!(f.analyticity_defect() < 1e-9);
        }
    }

    #[test]
    fn solve_with_unit_coefficient_is_projection() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let one = PeriodicGrid::from_fn(N, |_| Complex64::new(1.0, 0.0)).unwrap();
        let g = random_trig_poly(&mut rng, 10);
        let p = RiemannProblem::new(one, g.clone()).unwrap();
        let s = solve_riemann(&p).unwrap();
        assert!(s.phi_plus.max_norm_diff(&project_plus_coeff(&g)) < 1e-10);
        // Phi^+ - Phi^- = g forces Phi^- = -P_- g
        let minus_expected = project_minus(&g).map(|v| -v);
        assert!(s.phi_minus.max_norm_diff(&minus_expected) < 1e-10);
        assert!(s.residual_max < 1e-10);
    }

    #[test]
    fn manufactured_solution_round_trip() {
        // Phi^+ = 2 + e^{-it}, Phi^- = e^{it}, G with index 0
        let phi_p = PeriodicGrid::from_fn(N, |t| {
            Complex64::new(2.0, 0.0) + Complex64::from_polar(1.0, -t)
        })
        .unwrap();
        let phi_m = PeriodicGrid::from_fn(N, |t| Complex64::from_polar(1.0, t)).unwrap();
        let coeff = PeriodicGrid::from_fn(N, |t| {
            Complex64::new(3.0, 0.5) + Complex64::from_polar(0.8, -t) + Complex64::from_polar(0.4, 2.0 * t)
        })
        .unwrap();
        assert_eq!(compute_index(&coeff).unwrap(), 0);
        let rhs = (0..N)
            .map(|j| phi_p.values()[j] - coeff.values()[j] * phi_m.values()[j])
            .collect::<Vec<_>>();
        let p = RiemannProblem::new(coeff, PeriodicGrid::new(rhs).unwrap()).unwrap();
        let s = solve_riemann(&p).unwrap();
        assert!(s.phi_plus.max_norm_diff(&phi_p) < 1e-8);
        assert!(s.phi_minus.max_norm_diff(&phi_m) < 1e-8);
        assert!(s.residual_max < 1e-8);
    }

    #[test]
    fn nonzero_index_is_an_obstruction() {
        let g = PeriodicGrid::from_fn(N, |t| Complex64::from_polar(1.0, t)).unwrap();
        let rhs = PeriodicGrid::from_fn(N, |t| Complex64::new(t.cos(), 0.0)).unwrap();
        let p = RiemannProblem::new(g, rhs).unwrap();
        match solve_riemann(&p) {
            Err(CzError::NonzeroIndex { kappa, .. }) => assert_eq!(kappa, 1),
            other => panic!("expected index obstruction, got {other:?}"),
        }
    }

    #[test]
    fn endpoint_periodicity_of_sampling() {
        // G(-pi) = G(pi) holds by periodic sampling
        let g = PeriodicGrid::from_fn(N, |t| Complex64::new(2.0 + t.cos(), t.sin())).unwrap();
        let at_minus_pi = g.values()[0];
        let wrap = Complex64::new(2.0 + t_node(N, 0).cos(), t_node(N, 0).sin());
        assert!((at_minus_pi - wrap).norm() < 1e-15);
    }
}
