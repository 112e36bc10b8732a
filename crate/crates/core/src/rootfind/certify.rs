use serde::{Deserialize, Serialize};

use super::contour::{complex_root_count, QuadOptions, Rectangle};
use super::real::{real_roots, RootOptions};
use crate::error::{Error, Result};
use crate::trigpoly::ExpPoly1D;

/// Density of complex zeros of the entire extension: `y_d − y_1` (0 for a single term).
pub fn density_complex(p: &ExpPoly1D) -> f64 {
    if p.len() < 2 {
        0.0
    } else {
        p.bandwidth()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootednessVerdict {
    RealRooted,
    NotRealRooted,
}

/// Finite-window comparison of the real and complex zero densities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealRootedness {
    pub verdict: RootednessVerdict,
    /// Real zeros on `[−R, R]` with multiplicity, divided by `2R`.
    pub rho_real: f64,
    pub rho_complex: f64,
    pub radius: f64,
    pub tol: f64,
    pub real_count: u64,
    /// Zeros in `[−R, R] × [−H, H]` by the argument principle, if that count succeeded.
    pub strip_count: Option<i64>,
    /// Heuristic strip height `H`.
    pub strip_height: f64,
    /// Whether the strip count agrees with the verdict.
    pub strip_consistent: Option<bool>,
    pub note: String,
}

impl RealRootedness {
    pub fn is_real_rooted(&self) -> bool {
        self.verdict == RootednessVerdict::RealRooted
    }
}

/// `H = (ln Σ|c_j| − ln min(|c_1|, |c_d|)) / (2π (y_2 − y_1))`.
pub fn strip_height(p: &ExpPoly1D) -> f64 {
    let t = p.terms();
    if t.len() < 2 {
        return 0.0;
    }
    let edge = t[0].1.norm().min(t[t.len() - 1].1.norm());
    (p.coeff_abs_sum().ln() - edge.ln()) / (2.0 * std::f64::consts::PI * (t[1].0 - t[0].0))
}

/// Decides real-rootedness of `p` by comparing `ρ_r(R)` with `ρ_c = y_d − y_1`.
///
/// The default tolerance is `5/(2R) + 0.01 ρ_c`.
pub fn is_real_rooted(p: &ExpPoly1D, radius: f64, tol: Option<f64>, opts: &RootOptions) -> Result<RealRootedness> {
    let rho_c = density_complex(p);
    if p.len() >= 2 && radius < 50.0 / p.bandwidth() {
        return Err(Error::InvalidArgument(format!(
            "R = {radius} is below 50/(y_d - y_1) = {}",
            50.0 / p.bandwidth()
        )));
    }
    let tol = tol.unwrap_or(5.0 / (2.0 * radius) + 0.01 * rho_c);
    let roots = real_roots(p, -radius, radius, opts)?;
    let real_count = roots.total_multiplicity();
    let rho_r = real_count as f64 / (2.0 * radius);
    let verdict = if (rho_r - rho_c).abs() < tol {
        RootednessVerdict::RealRooted
    } else {
        RootednessVerdict::NotRealRooted
    };
    let h = strip_height(p);
    let (strip_count, strip_consistent, note) = if p.len() < 2 {
        (Some(0), Some(true), "single exponential: no zeros".to_string())
    } else {
        match complex_root_count(p, Rectangle::strip(-radius, radius, h), &QuadOptions::default()) {
            Ok(c) => {
                let agrees = match verdict {
                    RootednessVerdict::RealRooted => c == real_count as i64,
                    RootednessVerdict::NotRealRooted => c > real_count as i64,
                };
                let note = if agrees {
                    "strip count (heuristic height) agrees".to_string()
                } else {
                    format!("strip count {c} (heuristic height) disagrees with real count {real_count}")
                };
                (Some(c), Some(agrees), note)
            }
            Err(e) => (None, None, format!("strip count unavailable: {e}")),
        }
    };
    Ok(RealRootedness {
        verdict,
        rho_real: rho_r,
        rho_complex: rho_c,
        radius,
        tol,
        real_count,
        strip_count,
        strip_height: h,
        strip_consistent,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        assert_eq!(density_complex(&ExpPoly1D::from_real(&[(1.0, 1.0), (0.0, -1.0)]).unwrap()), 1.0);
        assert_eq!(density_complex(&ExpPoly1D::character(5.0)), 0.0);
    }

    #[test]
    fn shifted_exponential_is_not_real_rooted() {
        let p = ExpPoly1D::from_real(&[(1.0, 1.0), (0.0, 2.0)]).unwrap();
        let v = is_real_rooted(&p, 100.0, None, &RootOptions::default()).unwrap();
        assert_eq!(v.verdict, RootednessVerdict::NotRealRooted);
        assert_eq!(v.rho_real, 0.0);
        assert_eq!(v.rho_complex, 1.0);
        assert_eq!(v.strip_count, Some(200));
        assert_eq!(v.strip_consistent, Some(true));
    }

    #[test]
    fn window_precondition() {
        let p = ExpPoly1D::from_real(&[(1.0, 1.0), (0.0, 2.0)]).unwrap();
        assert!(is_real_rooted(&p, 10.0, None, &RootOptions::default()).is_err());
    }
}
