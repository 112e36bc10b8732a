//! Strip cut-and-project sets `{m cos θ + n sin θ : |m sin θ − n cos θ| < ℓ/2}`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rootfind::WeightedPointSet;
use crate::torus::{circ_dist, CompactificationMap, Slope};

/// Points of the open strip closer than this to its edge are dropped.
pub const STRIP_GUARD: f64 = 1e-12;
/// Projections closer than this (relative) are merged into one point.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// Scalar dilation `α` with the integer matrix `A` satisfying `ψ(αx) = A ψ(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dilation {
    pub alpha: f64,
    #[serde(rename = "A")]
    pub matrix: [[i64; 2]; 2],
}

impl Dilation {
    /// `α = (1 + √5)/2` with `A = [[0, 1], [1, 1]]`.
    pub fn golden() -> Self {
        Dilation { alpha: crate::torus::golden(), matrix: [[0, 1], [1, 1]] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutProjectConfig {
    #[serde(serialize_with = "slope_out", deserialize_with = "slope_in")]
    pub tan_theta: Slope,
    pub ell: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilation: Option<Dilation>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SlopeJson {
    Num(f64),
    Name(String),
}

fn slope_out<S: Serializer>(s: &Slope, ser: S) -> std::result::Result<S::Ok, S::Error> {
    match s.label {
        crate::torus::SlopeLabel::Value(t) => SlopeJson::Num(t),
        _ => SlopeJson::Name(s.to_string()),
    }
    .serialize(ser)
}

fn slope_in<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Slope, D::Error> {
    match SlopeJson::deserialize(de)? {
        SlopeJson::Num(t) => Ok(Slope::from_tan(t)),
        SlopeJson::Name(s) => s.parse().map_err(serde::de::Error::custom),
    }
}

impl CutProjectConfig {
    pub fn new(tan_theta: Slope, ell: f64, radius: f64) -> Result<Self> {
        let cfg = CutProjectConfig { tan_theta, ell, radius, dilation: None };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_dilation(mut self, d: Dilation) -> Self {
        self.dilation = Some(d);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ell > 0.0 && self.ell.is_finite()) {
            return Err(Error::InvalidArgument("ell must be positive".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidArgument("R must be positive".into()));
        }
        Ok(())
    }

    pub fn map(&self) -> CompactificationMap {
        CompactificationMap::planar(self.tan_theta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutProjectSet {
    pub points: WeightedPointSet,
    /// Lattice points whose projections coincided with another one.
    pub merged: usize,
}

fn index_range(coef: f64, lo: f64, hi: f64) -> Option<(i64, i64)> {
    // integers n with lo <= coef n <= hi, widened by one
    if coef.abs() < 1e-15 {
        return (lo <= 0.0 && 0.0 <= hi).then_some((i64::MIN, i64::MAX));
    }
    let (a, b) = if coef > 0.0 { (lo / coef, hi / coef) } else { (hi / coef, lo / coef) };
    Some((a.floor() as i64 - 1, b.ceil() as i64 + 1))
}

/// The points of the cut-and-project set in `[−R, R]`.
pub fn generate(cfg: &CutProjectConfig) -> Result<CutProjectSet> {
    cfg.validate()?;
    let (c, s) = (cfg.tan_theta.cos(), cfg.tan_theta.sin());
    let half = cfg.ell / 2.0 - STRIP_GUARD;
    let r = cfg.radius;
    let bound = (r + cfg.ell).ceil() as i64 + 1;
    let mut raw: Vec<f64> = (-bound..=bound)
        .into_par_iter()
        .flat_map_iter(|m| {
            let mf = m as f64;
            // strip: |m s − n c| < ℓ/2 ; window: |m c + n s| <= R
            let strip = index_range(-c, -half - mf * s, half - mf * s);
            let window = index_range(s, -r - mf * c, r - mf * c);
            let (lo, hi) = match (strip, window) {
                (Some(a), Some(b)) => (a.0.max(b.0).max(-bound), a.1.min(b.1).min(bound)),
                _ => (1, 0),
            };
            (lo..=hi).filter_map(move |n| {
                let nf = n as f64;
                let lam = mf * c + nf * s;
                ((mf * s - nf * c).abs() < half && lam.abs() <= r).then_some(lam)
            })
        })
        .collect();
    raw.sort_by(f64::total_cmp);
    let mut points: Vec<(f64, u32)> = Vec::with_capacity(raw.len());
    let mut merged = 0;
    for x in raw {
        match points.last_mut() {
            Some(last) if (x - last.0).abs() <= COINCIDENCE_TOL * x.abs().max(1.0) => {
                last.1 += 1;
                merged += 1;
            }
            _ => points.push((x, 1)),
        }
    }
    Ok(CutProjectSet { points: WeightedPointSet::symmetric(points, r)?, merged })
}

/// `ℓ sinc(πℓ(−k₁ sin θ + k₂ cos θ))`, the integral of `ζ_k` over the window segment.
pub fn kappa_coeff_closed_form(cfg: &CutProjectConfig, k: [i64; 2]) -> f64 {
    let (c, s) = (cfg.tan_theta.cos(), cfg.tan_theta.sin());
    let x = PI * cfg.ell * (-(k[0] as f64) * s + k[1] as f64 * c);
    let sinc = if x.abs() < 1e-300 { 1.0 } else { x.sin() / x };
    cfg.ell * sinc
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationViolation {
    pub lambda: f64,
    pub image: f64,
    /// Distance from `αλ` to the nearest point of the set.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationVerdict {
    /// Number of `λ` with `|αλ| ≤ R − margin`.
    pub tested: usize,
    pub violations: Vec<DilationViolation>,
}

impl DilationVerdict {
    pub fn is_closed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `αλ ∈ Λ` (within `tol`) for every `λ` with `|αλ| ≤ R − margin`.
pub fn dilation_check(pts: &WeightedPointSet, alpha: f64, margin: f64, tol: f64) -> DilationVerdict {
    let xs: Vec<f64> = pts.points().iter().map(|p| p.0).collect();
    let limit = pts.radius() - margin;
    let nearest = |y: f64| {
        let i = xs.partition_point(|&x| x < y);
        let mut d = f64::INFINITY;
        if i < xs.len() {
            d = d.min((xs[i] - y).abs());
        }
        if i > 0 {
            d = d.min((y - xs[i - 1]).abs());
        }
        d
    };
    let mut tested = 0;
    let mut violations = Vec::new();
    for &x in &xs {
        let y = alpha * x;
        if y.abs() > limit {
            continue;
        }
        tested += 1;
        let gap = nearest(y);
        if gap >= tol {
            violations.push(DilationViolation { lambda: x, image: y, gap });
        }
    }
    DilationVerdict { tested, violations }
}

/// Largest torus distance between `ψ(αx)` and `A ψ(x)` over `samples` points of `[−R, R]`.
pub fn check_dilation_identity(map: &CompactificationMap, d: &Dilation, radius: f64, samples: usize) -> Result<f64> {
    if map.m() != 2 || map.n() != 1 {
        return Err(Error::InvalidArgument("dilation identity is checked for planar maps".into()));
    }
    let g = crate::torus::golden();
    let mut worst: f64 = 0.0;
    for j in 0..samples {
        let x = radius * (2.0 * (j as f64 * g).fract() - 1.0);
        let lhs = map.project(&[d.alpha * x]);
        let p = map.project(&[x]);
        for i in 0..2 {
            let rhs = d.matrix[i][0] as f64 * p[0] + d.matrix[i][1] as f64 * p[1];
            worst = worst.max(circ_dist(lhs[i], rhs));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_cfg(ell: f64, r: f64) -> CutProjectConfig {
        CutProjectConfig::new(Slope::golden(), ell, r).unwrap()
    }

    #[test]
    fn density_tracks_window_length() {
        let one = generate(&golden_cfg(1.0, 50.0)).unwrap().points;
        assert!((one.density() - 1.0).abs() < 0.02);
        let half = generate(&golden_cfg(0.5, 50.0)).unwrap().points;
        assert!((half.len() as f64 / one.len() as f64 - 0.5).abs() < 0.03);
        let tiny = generate(&golden_cfg(1e-9, 50.0)).unwrap().points;
        assert_eq!(tiny.points(), &[(0.0, 1)]);
    }

    #[test]
    fn closed_form_values() {
        let cfg = golden_cfg(1.0, 50.0);
        assert_eq!(kappa_coeff_closed_form(&cfg, [0, 0]), 1.0);
        let s = cfg.tan_theta.sin();
        let want = (PI * s).sin() / (PI * s);
        assert!((kappa_coeff_closed_form(&cfg, [1, 0]) - want).abs() < 1e-15);
        assert_eq!(kappa_coeff_closed_form(&golden_cfg(0.3, 1.0), [0, 0]), 0.3);
    }

    #[test]
    fn golden_dilation() {
        let cfg = golden_cfg(1.0, 200.0).with_dilation(Dilation::golden());
        assert!(check_dilation_identity(&cfg.map(), &Dilation::golden(), 200.0, 100).unwrap() < 1e-10);
        let pts = generate(&cfg).unwrap().points;
        let v = dilation_check(&pts, crate::torus::golden(), 1.0, 1e-9);
        assert!(v.tested > 100 && v.is_closed());
        assert!(dilation_check(&pts, 1.0, 1.0, 1e-9).is_closed());
        let other = generate(&CutProjectConfig::new(Slope::sqrt2(), 1.0, 200.0).unwrap()).unwrap().points;
        assert!(!dilation_check(&other, crate::torus::golden(), 1.0, 1e-9).is_closed());
    }

    #[test]
    fn rational_slope_merges() {
        let set = generate(&CutProjectConfig::new(Slope::from_tan(1.0), 3.0, 10.0).unwrap()).unwrap();
        assert!(set.merged > 0);
        assert!(set.points.max_multiplicity() > 1);
    }

    #[test]
    fn config_json() {
        let cfg: CutProjectConfig = serde_json::from_str(r#"{"tan_theta":"golden","ell":1.0,"R":50}"#).unwrap();
        assert_eq!(cfg.tan_theta.label, crate::torus::SlopeLabel::Golden);
        let cfg: CutProjectConfig = serde_json::from_str(r#"{"tan_theta":1.5,"ell":1.0,"R":50}"#).unwrap();
        assert_eq!(cfg.tan_theta.tan(), 1.5);
        let back: CutProjectConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
