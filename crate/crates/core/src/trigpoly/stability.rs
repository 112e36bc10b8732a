use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LaurentPoly;
use crate::error::{Error, Result};

/// Result of the sampled polydisk test. `NoRootFound` is evidence, not a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Stability {
    NoRootFound { grid_size: usize, sampled: bool },
    Unstable { witness: [Complex64; 2], degenerate: bool },
}

impl Stability {
    pub fn is_unstable(&self) -> bool {
        matches!(self, Stability::Unstable { .. })
    }
}

/// Roots of `Σ coeffs[d] z^d` via companion-matrix eigenvalues.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut deg = coeffs.len();
    while deg > 0 && coeffs[deg - 1].norm() == 0.0 {
        deg -= 1;
    }
    if deg <= 1 {
        return Vec::new();
    }
    let n = deg - 1;
    let lead = coeffs[n];
    if n == 1 {
        return vec![-coeffs[0] / lead];
    }
    let comp = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -coeffs[n - 1 - j] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::default()
        }
    });
    comp.schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default()
}

impl LaurentPoly {
    /// Samples `z₁` on a polar grid (`grid_size` radii × `grid_size` angles) in the
    /// open unit disk and solves for `z₂` exactly; any joint root with both moduli
    /// below `1 − tol` is an instability witness. Returns the witness that sits
    /// deepest in the bidisk. Requires `m = 2`.
    pub fn is_stable_sampled(&self, grid_size: usize, tol: f64) -> Result<Stability> {
        if self.m() != 2 {
            return Err(Error::InvalidArgument("sampled stability needs m = 2".into()));
        }
        if grid_size == 0 {
            return Err(Error::InvalidArgument("grid_size must be positive".into()));
        }
        let lo = self.min_exponents();
        let deg2 = self.terms().map(|(k, _)| (k[1] - lo[1]) as usize).max().unwrap();
        let scale: f64 = self.terms().map(|(_, c)| c.norm()).sum();
        let mut best: Option<([Complex64; 2], bool, f64)> = None;
        for ri in 0..grid_size {
            let r = ri as f64 / grid_size as f64;
            if r >= 1.0 - tol {
                continue;
            }
            let n_ang = if ri == 0 { 1 } else { grid_size };
            for ai in 0..n_ang {
                let z1 = Complex64::from_polar(r, 2.0 * PI * ai as f64 / grid_size as f64);
                let mut coeffs = vec![Complex64::default(); deg2 + 1];
                for (k, c) in self.terms() {
                    coeffs[(k[1] - lo[1]) as usize] += c * z1.powi((k[0] - lo[0]) as i32);
                }
                if coeffs.iter().all(|c| c.norm() <= 1e-14 * scale) {
                    let cand = [z1, Complex64::default()];
                    if best.as_ref().is_none_or(|b| r < b.2) {
                        best = Some((cand, true, r));
                    }
                    continue;
                }
                for z2 in poly_roots(&coeffs) {
                    if z2.norm() < 1.0 - tol {
                        let depth = r.max(z2.norm());
                        if best.as_ref().is_none_or(|b| depth < b.2) {
                            best = Some(([z1, z2], false, depth));
                        }
                    }
                }
            }
        }
        Ok(match best {
            Some((witness, degenerate, _)) => Stability::Unstable { witness, degenerate },
            None => Stability::NoRootFound { grid_size, sampled: true },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_roots() {
        // (z − 1)(z − 2)(z + 3) = z³ − 7z + 6
        let c: Vec<Complex64> = [6.0, -7.0, 0.0, 1.0].iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut r: Vec<f64> = poly_roots(&c).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (a, b) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn stability_examples() {
        let ly = LaurentPoly::from_real(2, &[(&[1, 1], 2.0), (&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 2.0)]).unwrap();
        assert!(!ly.is_stable_sampled(64, 1e-9).unwrap().is_unstable());

        let p = LaurentPoly::from_real(2, &[(&[1, 1], 1.0), (&[0, 0], -0.25)]).unwrap();
        match p.is_stable_sampled(64, 1e-9).unwrap() {
            Stability::Unstable { witness, degenerate } => {
                assert!(!degenerate);
                assert!((witness[0].norm() - 0.5).abs() < 1e-12);
                assert!((witness[1].norm() - 0.5).abs() < 1e-12);
                assert!(p.eval_z(&witness).norm() < 1e-12);
            }
            v => panic!("{v:?}"),
        }

        let q = LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[0, 0], -1.0)]).unwrap();
        assert!(!q.is_stable_sampled(64, 1e-9).unwrap().is_unstable());
    }

    #[test]
    fn degenerate_slice() {
        // (z1 − 1/2)(1 + z2) vanishes identically on the slice z1 = 1/2
        let p = LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[1, 1], 1.0), (&[0, 0], -0.5), (&[0, 1], -0.5)])
            .unwrap();
        match p.is_stable_sampled(8, 1e-9).unwrap() {
            Stability::Unstable { degenerate, witness } => {
                assert!(degenerate);
                assert!((witness[0] - Complex64::new(0.5, 0.0)).norm() < 1e-12);
            }
            v => panic!("{v:?}"),
        }
    }
}
