use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::winding::circle_winding;
use crate::error::{Error, Result};
use crate::trigpoly::ExpPoly1D;

/// Sorted finite window of a multiset `(Λ, c)` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPointSet {
    points: Vec<(f64, u32)>,
    lo: f64,
    hi: f64,
    /// Newton seeds that looked like roots but did not converge.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flagged: Vec<FlaggedRoot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlaggedRoot {
    pub seed: f64,
    pub last: Complex64,
    pub residual: f64,
    pub diagnostic: String,
}

impl WeightedPointSet {
    /// Points must be strictly increasing, with multiplicities at least 1, inside `[lo, hi]`.
    pub fn new(points: Vec<(f64, u32)>, lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidArgument("window must have positive length".into()));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidArgument("points must be strictly increasing".into()));
        }
        if points.iter().any(|&(x, c)| c == 0 || x < lo || x > hi || !x.is_finite()) {
            return Err(Error::InvalidArgument("point outside window or zero multiplicity".into()));
        }
        Ok(WeightedPointSet { points, lo, hi, flagged: Vec::new() })
    }

    /// Window `[−radius, radius]`.
    pub fn symmetric(points: Vec<(f64, u32)>, radius: f64) -> Result<Self> {
        Self::new(points, -radius, radius)
    }

    pub fn points(&self) -> &[(f64, u32)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Half the window length; the window is `[−R, R]` for symmetric sets.
    pub fn radius(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    /// `Σ c(λ)`.
    pub fn total_multiplicity(&self) -> u64 {
        self.points.iter().map(|&(_, c)| c as u64).sum()
    }

    /// Counting density `Σ c(λ) / (hi − lo)`.
    pub fn density(&self) -> f64 {
        self.total_multiplicity() as f64 / (self.hi - self.lo)
    }

    /// Smallest gap between consecutive points, the window estimate of `R₁(Λ)`.
    pub fn min_gap(&self) -> Option<f64> {
        self.points.windows(2).map(|w| w[1].0 - w[0].0).reduce(f64::min)
    }

    /// The points inside `[−radius, radius]`.
    pub fn restrict(&self, radius: f64) -> Result<Self> {
        let pts = self.points.iter().copied().filter(|&(x, _)| x.abs() <= radius).collect();
        Self::new(pts, -radius, radius)
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.points.iter().map(|&(_, c)| c).max().unwrap_or(0)
    }
}

/// Options for [`real_roots`]. `None` fields take bandwidth-derived defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootOptions {
    /// Grid step of the `|p|²` scan; default `0.4 / (y_d − y_1)`.
    pub grid_step: Option<f64>,
    pub newton_tol: f64,
    /// Radius of the multiplicity circle; default `min(0.25 min gap, 0.05 / (y_d − y_1))`.
    pub mult_radius: Option<f64>,
    pub max_newton: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { grid_step: None, newton_tol: 1e-12, mult_radius: None, max_newton: 100 }
    }
}

/// Candidates closer than this are one cluster before refinement.
const CLUSTER_TOL: f64 = 1e-6;
const MULT_RESIDUAL: f64 = 0.1;

enum Newton {
    Converged(Complex64),
    Escaped,
    Failed { last: Complex64, residual: f64 },
}

fn newton(p: &ExpPoly1D, z0: Complex64, tol: f64, max_iter: usize, escape: impl Fn(Complex64) -> bool) -> Newton {
    let floor = 256.0 * f64::EPSILON * p.coeff_abs_sum();
    let mut z = z0;
    for _ in 0..max_iter {
        let (v, d) = p.eval_entire_d(z);
        if v.norm() <= floor {
            return Newton::Converged(z);
        }
        if d.norm() == 0.0 {
            return Newton::Failed { last: z, residual: v.norm() };
        }
        let step = v / d;
        z -= step;
        if escape(z) {
            return Newton::Escaped;
        }
        if step.norm() <= tol * z.norm().max(1.0) {
            return Newton::Converged(z);
        }
    }
    let residual = p.eval_entire(z).norm();
    Newton::Failed { last: z, residual }
}

/// Real zeros of the entire extension of `p` on `[a, b]`, with multiplicities.
///
/// Every point of a grid of step at most `grid_step` seeds a complex Newton
/// iteration; converged real candidates are clustered, each cluster's
/// multiplicity is the winding number of `p` around a small circle, and
/// multiple roots are polished as simple roots of the matching derivative.
pub fn real_roots(p: &ExpPoly1D, a: f64, b: f64, opts: &RootOptions) -> Result<WeightedPointSet> {
    if !(b > a) {
        return Err(Error::InvalidArgument("need a < b".into()));
    }
    if p.len() == 1 {
        // a single exponential never vanishes
        return WeightedPointSet::new(Vec::new(), a, b);
    }
    let bw = p.bandwidth();
    let step = opts.grid_step.unwrap_or(0.4 / bw);
    if !(step > 0.0 && step < 1.0 / (2.0 * bw)) {
        return Err(Error::InvalidArgument(format!(
            "grid_step {step} must lie in (0, 1/(2(y_d - y_1))) = (0, {})",
            1.0 / (2.0 * bw)
        )));
    }
    let n = ((b - a) / step).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let mag: Vec<f64> = grid.par_iter().map(|&x| p.eval(x).norm_sqr()).collect();
    let is_local_min = |i: usize| {
        (i == 0 || mag[i] <= mag[i - 1]) && (i == n || mag[i] <= mag[i + 1])
    };

    let imag_tol = 1e-6 / bw.max(1.0);
    let reach = 10.0 / bw;
    let escape = |z: Complex64| z.im.abs() > reach || z.re < a - reach || z.re > b + reach;
    let outcomes: Vec<(usize, Newton)> = (0..=n)
        .into_par_iter()
        .map(|i| (i, newton(p, Complex64::new(grid[i], 0.0), opts.newton_tol, opts.max_newton, escape)))
        .collect();

    let mut flagged = Vec::new();
    let mut cands: Vec<f64> = Vec::new();
    let scale_sq = p.coeff_abs_sum().powi(2);
    for (i, out) in outcomes {
        match out {
            Newton::Converged(z) => {
                if z.im.abs() <= imag_tol && z.re >= a - 1e-9 && z.re <= b + 1e-9 {
                    cands.push(z.re.clamp(a, b));
                }
            }
            Newton::Failed { last, residual } if is_local_min(i) && mag[i] < 1e-4 * scale_sq => {
                flagged.push(FlaggedRoot {
                    seed: grid[i],
                    last,
                    residual,
                    diagnostic: format!("Newton did not converge in {} iterations", opts.max_newton),
                });
            }
            _ => {}
        }
    }
    cands.sort_by(f64::total_cmp);

    // clusters of candidates
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for x in cands {
        match clusters.last_mut() {
            Some(c) if x - c[c.len() - 1] <= CLUSTER_TOL => c.push(x),
            _ => clusters.push(vec![x]),
        }
    }
    let centers: Vec<f64> = clusters.iter().map(|c| c[c.len() / 2]).collect();
    let gap = centers.windows(2).map(|w| w[1] - w[0]).reduce(f64::min);
    let radius = opts.mult_radius.unwrap_or_else(|| {
        let r = 0.05 / bw;
        gap.map_or(r, |g| r.min(0.25 * g))
    });

    let f = |z: Complex64| p.eval_entire(z);
    let floor = 1e-300;
    let refined: Vec<Option<(f64, u32)>> = centers
        .par_iter()
        .map(|&x| -> Result<Option<(f64, u32)>> {
            let w = circle_winding(&f, Complex64::new(x, 0.0), radius, floor)
                .map_err(|_| Error::IllConditionedMultiplicity { x, winding: f64::NAN, residual: f64::NAN })?;
            let m = w.round();
            let residual = (w - m).abs();
            if residual >= MULT_RESIDUAL {
                return Err(Error::IllConditionedMultiplicity { x, winding: w, residual });
            }
            if m < 1.0 {
                return Ok(None);
            }
            let m = m as u32;
            let mut target = p.clone();
            for _ in 1..m {
                match target.derivative() {
                    Some(d) => target = d,
                    None => return Ok(Some((x, m))),
                }
            }
            let polished = match newton(&target, Complex64::new(x, 0.0), opts.newton_tol, opts.max_newton, |z| {
                (z.re - x).abs() > radius || z.im.abs() > radius
            }) {
                Newton::Converged(z) => z.re,
                _ => x,
            };
            Ok(Some((polished.clamp(a, b), m)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut points: Vec<(f64, u32)> = Vec::new();
    for (x, m) in refined.into_iter().flatten() {
        match points.last_mut() {
            Some(last) if (x - last.0).abs() <= opts.newton_tol * x.abs().max(1.0) => {
                last.1 = last.1.max(m);
            }
            _ => points.push((x, m)),
        }
    }
    points.sort_by(|u, v| u.0.total_cmp(&v.0));
    let mut set = WeightedPointSet::new(points, a, b)?;
    set.flagged = flagged;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_are_simple_roots() {
        let p = ExpPoly1D::from_real(&[(1.0, 1.0), (0.0, -1.0)]).unwrap();
        let s = real_roots(&p, -2.5, 2.5, &RootOptions::default()).unwrap();
        let xs: Vec<f64> = s.points().iter().map(|p| p.0).collect();
        assert_eq!(xs.len(), 5);
        for (x, want) in xs.iter().zip([-2.0, -1.0, 0.0, 1.0, 2.0]) {
            assert!((x - want).abs() < 1e-12);
        }
        assert!(s.points().iter().all(|p| p.1 == 1));
        assert!((s.min_gap().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_square_has_double_roots() {
        let p = ExpPoly1D::from_real(&[(2.0, 1.0), (1.0, -2.0), (0.0, 1.0)]).unwrap();
        let s = real_roots(&p, -0.5, 1.5, &RootOptions::default()).unwrap();
        assert_eq!(s.len(), 2);
        for (pt, want) in s.points().iter().zip([0.0, 1.0]) {
            assert!((pt.0 - want).abs() < 1e-12, "{pt:?}");
            assert_eq!(pt.1, 2);
        }
    }

    #[test]
    fn no_real_roots() {
        let p = ExpPoly1D::from_real(&[(1.0, 1.0), (0.0, 2.0)]).unwrap();
        assert!(real_roots(&p, -10.0, 10.0, &RootOptions::default()).unwrap().is_empty());
        let single = ExpPoly1D::character(5.0);
        assert!(real_roots(&single, -10.0, 10.0, &RootOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn nyquist_guard() {
        let p = ExpPoly1D::from_real(&[(1.0, 1.0), (0.0, -1.0)]).unwrap();
        let opts = RootOptions { grid_step: Some(0.6), ..Default::default() };
        assert!(real_roots(&p, 0.0, 3.0, &opts).is_err());
    }

    #[test]
    fn weighted_point_set_validation() {
        assert!(WeightedPointSet::new(vec![(0.0, 1), (0.0, 1)], -1.0, 1.0).is_err());
        assert!(WeightedPointSet::new(vec![(0.0, 0)], -1.0, 1.0).is_err());
        assert!(WeightedPointSet::new(vec![(2.0, 1)], -1.0, 1.0).is_err());
        let s = WeightedPointSet::symmetric(vec![(-0.5, 1), (0.25, 3)], 1.0).unwrap();
        assert_eq!(s.total_multiplicity(), 4);
        assert_eq!(s.density(), 2.0);
        assert_eq!(s.restrict(0.3).unwrap().len(), 1);
    }
}
