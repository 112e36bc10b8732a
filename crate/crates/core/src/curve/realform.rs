use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::trigpoly::{LaurentPoly, SelfDuality};

/// Coefficient tolerance of the self-duality test behind [`RealForm::new`].
pub const SELF_DUAL_TOL: f64 = 1e-12;
const REALNESS_TOL: f64 = 1e-10;
const REALNESS_SAMPLES: usize = 100;

/// `r(θ) = Re(ν e^{−πi aᵀθ} P(e^{2πiθ}))`, a real function whose zero set on the
/// torus is the real zero set of a self-dual `P`.
///
/// `r` is periodic up to sign: `r(θ + e_i) = (−1)^{a_i} r(θ)`, so sign tests
/// must be done on lifted coordinates.
#[derive(Debug, Clone)]
pub struct RealForm {
    poly: LaurentPoly,
    a: Vec<i64>,
    nu: Complex64,
}

fn probe_points(m: usize) -> impl Iterator<Item = Vec<f64>> {
    // Kronecker sequence with square roots of primes as steps
    const STEPS: [f64; 6] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0];
    (1..=REALNESS_SAMPLES).map(move |j| {
        (0..m).map(|i| (j as f64 * STEPS[i % 6].sqrt() + 0.1 * i as f64).fract()).collect()
    })
}

impl RealForm {
    /// Fails with [`Error::NotSelfDual`] when no unimodular phase makes the
    /// expression real on 100 probe points to within `1e−10`.
    pub fn new(poly: &LaurentPoly) -> Result<Self> {
        let (a, u) = match poly.is_self_dual(SELF_DUAL_TOL) {
            SelfDuality::Yes { a, u } => (a, u),
            SelfDuality::No => return Err(Error::NotSelfDual { max_imag: f64::NAN }),
        };
        let scale: f64 = poly.terms().map(|(_, c)| c.norm()).sum::<f64>().max(1.0);
        let root_conj = u.conj().sqrt();
        let root = u.sqrt();
        let mut worst = f64::INFINITY;
        for nu in [root_conj, -root_conj, root, -root] {
            let form = RealForm { poly: poly.clone(), a: a.clone(), nu };
            let max_imag = probe_points(poly.m())
                .map(|t| form.complex_value(&t).im.abs())
                .fold(0.0, f64::max);
            if max_imag < REALNESS_TOL * scale {
                return Ok(form);
            }
            worst = worst.min(max_imag);
        }
        Err(Error::NotSelfDual { max_imag: worst })
    }

    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    /// Exponent shift `a` with `P(z⁻¹) = u z^{−a} P(z)`.
    pub fn shift(&self) -> &[i64] {
        &self.a
    }

    /// The unimodular phase `ν`.
    pub fn phase(&self) -> Complex64 {
        self.nu
    }

    fn rotation(&self, theta: &[f64]) -> Complex64 {
        let s: f64 = self.a.iter().zip(theta).map(|(&a, &t)| a as f64 * t).sum();
        self.nu * Complex64::cis(-PI * s)
    }

    fn complex_value(&self, theta: &[f64]) -> Complex64 {
        self.rotation(theta) * self.poly.eval_torus(theta)
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        self.complex_value(theta).re
    }

    /// Value and gradient in turns.
    pub fn eval_grad(&self, theta: &[f64]) -> (f64, Vec<f64>) {
        let rot = self.rotation(theta);
        let (p, dp) = self.poly.eval_torus_grad(theta);
        let grad = dp
            .iter()
            .zip(&self.a)
            .map(|(d, &a)| (rot * (d - Complex64::new(0.0, PI * a as f64) * p)).re)
            .collect();
        ((rot * p).re, grad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn palindromic_example() {
        let p = LaurentPoly::from_real(2, &[(&[1, 1], 2.0), (&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 2.0)]).unwrap();
        let r = RealForm::new(&p).unwrap();
        assert_eq!(r.shift(), &[1, 1]);
        assert!((r.eval(&[0.25, 0.0]).abs() - 3.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn circle_example() {
        let p = LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[0, 0], -1.0)]).unwrap();
        let r = RealForm::new(&p).unwrap();
        for t in [0.1, 0.3, 0.77] {
            assert!((r.eval(&[t, 0.4]).abs() - 2.0 * (PI * t).sin()).abs() < 1e-12);
        }
        assert!(r.eval(&[0.0, 0.3]).abs() < 1e-15);
    }

    #[test]
    fn sine_difference_example() {
        let delta = 0.5;
        let p = LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[-1, 0], -1.0), (&[0, 1], -delta), (&[0, -1], delta)])
            .unwrap();
        let r = RealForm::new(&p).unwrap();
        let t = [0.13, 0.71];
        let want = 2.0 * (2.0 * PI * t[0]).sin() - 2.0 * delta * (2.0 * PI * t[1]).sin();
        assert!((r.eval(&t).abs() - want.abs()).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_differences() {
        let p = LaurentPoly::from_real(2, &[(&[1, 1], 2.0), (&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 2.0)]).unwrap();
        let r = RealForm::new(&p).unwrap();
        let t = [0.21, 0.64];
        let (_, g) = r.eval_grad(&t);
        let h = 1e-6;
        for i in 0..2 {
            let mut tp = t;
            let mut tm = t;
            tp[i] += h;
            tm[i] -= h;
            let fd = (r.eval(&tp) - r.eval(&tm)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6 * g[i].abs().max(1.0));
        }
    }

    #[test]
    fn rejects_non_self_dual() {
        let p = LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[0, 0], 2.0)]).unwrap();
        assert!(matches!(RealForm::new(&p), Err(Error::NotSelfDual { .. })));
    }
}
