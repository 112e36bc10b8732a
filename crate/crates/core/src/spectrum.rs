//! Bohr means of point sets, tables of `κ̂` on integer boxes, and the
//! constant-coefficient difference equations those tables satisfy.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveComponent, KappaQuadOptions, KappaQuadrature};
use crate::error::{Error, Result};
use crate::rootfind::WeightedPointSet;
use crate::torus::CompactificationMap;
use crate::trigpoly::LaurentPoly;

/// Constant `C` of the `C / R` error band attached to windowed means.
pub const DEFAULT_ERROR_CONSTANT: f64 = 5.0;

/// `(1/(hi − lo)) Σ c(λ) exp(−2πi yλ)`; for a symmetric window this is the mean over `[−R, R]`.
pub fn bohr_coefficient(pts: &WeightedPointSet, y: f64) -> Complex64 {
    let s: Complex64 = pts
        .points()
        .iter()
        .map(|&(x, c)| Complex64::cis(-2.0 * PI * y * x) * c as f64)
        .sum();
    s / (pts.hi() - pts.lo())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    /// Windowed Bohr means of a point set.
    BohrMean,
    /// Line integrals over the traced zero set; `window` is infinite.
    LineIntegral,
    /// Values supplied from outside.
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub k: Vec<i64>,
    /// `Mᵀk`.
    pub y: f64,
    pub value: Complex64,
    /// Window radius `R`; infinite for the line-integral route.
    pub window: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub map: CompactificationMap,
    pub source: SpectrumSource,
    /// The `C` in `error_estimate = C / R` for windowed entries.
    pub error_constant: f64,
    /// Sorted by `k`.
    pub entries: Vec<SpectrumEntry>,
}

/// `k` in the box `|k|_∞ ≤ kmax`, lexicographic.
pub fn box_indices(kmax: i64) -> Vec<[i64; 2]> {
    let mut v = Vec::with_capacity(((2 * kmax + 1) * (2 * kmax + 1)) as usize);
    for k1 in -kmax..=kmax {
        for k2 in -kmax..=kmax {
            v.push([k1, k2]);
        }
    }
    v
}

impl SpectrumTable {
    pub fn new(map: CompactificationMap, source: SpectrumSource, error_constant: f64, mut entries: Vec<SpectrumEntry>) -> Self {
        entries.sort_by(|a, b| a.k.cmp(&b.k));
        SpectrumTable { map, source, error_constant, entries }
    }

    pub fn get(&self, k: &[i64]) -> Option<&SpectrumEntry> {
        self.entries.binary_search_by(|e| e.k.as_slice().cmp(k)).ok().map(|i| &self.entries[i])
    }

    pub fn value(&self, k: &[i64]) -> Option<Complex64> {
        self.get(k).map(|e| e.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest `|y − Mᵀk|` over entries.
    pub fn frequency_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| (e.y - self.map.frequency1(&e.k)).abs())
            .fold(0.0, f64::max)
    }
}

/// `κ̂(k) ≈ bohr_coefficient(pts, Mᵀk)` with error estimate `C / R`.
pub fn kappa_hat_points(pts: &WeightedPointSet, map: &CompactificationMap, k: &[i64]) -> Result<SpectrumEntry> {
    if map.n() != 1 {
        return Err(Error::InvalidArgument("point-set route needs n = 1".into()));
    }
    if k.len() != map.m() {
        return Err(Error::DimensionMismatch { expected: map.m(), got: k.len() });
    }
    let y = map.frequency1(k);
    let r = pts.radius();
    Ok(SpectrumEntry {
        k: k.to_vec(),
        y,
        value: bohr_coefficient(pts, y),
        window: r,
        error_estimate: DEFAULT_ERROR_CONSTANT / r,
    })
}

/// Bohr-mean table on `|k|_∞ ≤ kmax` (`m = 2`).
pub fn table_from_points(pts: &WeightedPointSet, map: &CompactificationMap, kmax: i64) -> Result<SpectrumTable> {
    if map.m() != 2 {
        return Err(Error::InvalidArgument("spectrum tables need m = 2".into()));
    }
    let entries = box_indices(kmax)
        .par_iter()
        .map(|k| kappa_hat_points(pts, map, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable::new(map.clone(), SpectrumSource::BohrMean, DEFAULT_ERROR_CONSTANT, entries))
}

/// Line-integral table on `|k|_∞ ≤ kmax`; entries carry the quadrature error estimate.
pub fn table_from_curve(
    comps: &[CurveComponent],
    map: &CompactificationMap,
    kmax: i64,
    opts: &KappaQuadOptions,
) -> Result<SpectrumTable> {
    let quad = KappaQuadrature::new(comps, map);
    let entries = box_indices(kmax)
        .par_iter()
        .map(|&k| {
            let (value, est) = quad.eval(k);
            if est > opts.tol {
                return Err(Error::Quadrature { estimate: est });
            }
            Ok(SpectrumEntry { k: k.to_vec(), y: map.frequency1(&k), value, window: f64::INFINITY, error_estimate: est })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable::new(map.clone(), SpectrumSource::LineIntegral, 0.0, entries))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceResidual {
    pub max: f64,
    pub argmax: Vec<i64>,
    /// Number of `k` whose whole stencil lies in the table.
    pub interior: usize,
}

/// `max_k |Σ_j P_j κ̂(k − j)|` over every `k` whose stencil the table covers.
pub fn difference_residual(poly: &LaurentPoly, table: &SpectrumTable) -> Result<DifferenceResidual> {
    let index: HashMap<&[i64], Complex64> = table.entries.iter().map(|e| (e.k.as_slice(), e.value)).collect();
    let stencil: Vec<(&Vec<i64>, &Complex64)> = poly.terms().collect();
    let shift = |k: &[i64], j: &[i64]| -> Vec<i64> { k.iter().zip(j).map(|(a, b)| a - b).collect() };
    // candidate centers: every k with k − j in the table for some j
    let mut centers: Vec<Vec<i64>> = Vec::new();
    for e in &table.entries {
        for (j, _) in &stencil {
            centers.push(e.k.iter().zip(j.iter()).map(|(a, b)| a + b).collect());
        }
    }
    centers.sort();
    centers.dedup();
    let mut best: Option<(f64, Vec<i64>)> = None;
    let mut interior = 0;
    let mut fewest_missing: Option<Vec<Vec<i64>>> = None;
    for k in &centers {
        let mut sum = Complex64::default();
        let mut missing = Vec::new();
        for (j, c) in &stencil {
            let kj = shift(k, j);
            match index.get(kj.as_slice()) {
                Some(v) => sum += *c * v,
                None => missing.push(kj),
            }
        }
        if missing.is_empty() {
            interior += 1;
            let r = sum.norm();
            if best.as_ref().is_none_or(|b| r > b.0) {
                best = Some((r, k.clone()));
            }
        } else if fewest_missing.as_ref().is_none_or(|f| missing.len() < f.len()) {
            fewest_missing = Some(missing);
        }
    }
    match best {
        Some((max, argmax)) => Ok(DifferenceResidual { max, argmax, interior }),
        None => Err(Error::InsufficientCoverage { missing: fewest_missing.unwrap_or_default() }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumScan {
    pub table: SpectrumTable,
    /// `true` where `|κ̂(k)| < zero_threshold`, aligned with `table.entries`.
    pub null_mask: Vec<bool>,
    pub zero_threshold: f64,
    /// Sorted projected frequencies `Mᵀk` of the non-null entries.
    pub spectrum: Vec<f64>,
    /// Smallest gap in `spectrum`, if it has two points.
    pub min_spectral_gap: Option<f64>,
    /// Classification is threshold-based at finite `kmax` and `R`.
    pub classification: String,
}

/// Table on `|k|_∞ ≤ kmax`, null mask, and empirical spectrum.
pub fn spectrum_scan(pts: &WeightedPointSet, map: &CompactificationMap, kmax: i64, zero_threshold: f64) -> Result<SpectrumScan> {
    let table = table_from_points(pts, map, kmax)?;
    Ok(scan_table(table, zero_threshold))
}

/// Null mask and empirical spectrum of an existing table.
pub fn scan_table(table: SpectrumTable, zero_threshold: f64) -> SpectrumScan {
    let null_mask: Vec<bool> = table.entries.iter().map(|e| e.value.norm() < zero_threshold).collect();
    let mut spectrum: Vec<f64> = table
        .entries
        .iter()
        .zip(&null_mask)
        .filter(|(_, &n)| !n)
        .map(|(e, _)| e.y)
        .collect();
    spectrum.sort_by(f64::total_cmp);
    let min_spectral_gap = spectrum.windows(2).map(|w| w[1] - w[0]).reduce(f64::min);
    let kmax = table.entries.iter().flat_map(|e| e.k.iter().map(|v| v.abs())).max().unwrap_or(0);
    SpectrumScan {
        classification: format!("empirical: threshold {zero_threshold}, no accumulation claim beyond kmax = {kmax}"),
        table,
        null_mask,
        zero_threshold,
        spectrum,
        min_spectral_gap,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowDoubling {
    pub radius: f64,
    /// `max_k |κ̂_R(k) − κ̂_{2R}(k)|`.
    pub max_change: f64,
    /// Fitted `C = R · max_change`.
    pub fitted_constant: f64,
}

/// Compares Bohr means on `[−R, R]` and `[−2R, 2R]`; `pts` must cover `[−2R, 2R]`.
pub fn window_doubling(pts: &WeightedPointSet, map: &CompactificationMap, ks: &[[i64; 2]], radius: f64) -> Result<WindowDoubling> {
    if pts.lo() > -2.0 * radius || pts.hi() < 2.0 * radius {
        return Err(Error::InvalidArgument("point set must cover [-2R, 2R]".into()));
    }
    let small = pts.restrict(radius)?;
    let large = pts.restrict(2.0 * radius)?;
    let max_change = ks
        .iter()
        .map(|k| {
            let y = map.frequency1(k);
            (bohr_coefficient(&small, y) - bohr_coefficient(&large, y)).norm()
        })
        .fold(0.0, f64::max);
    Ok(WindowDoubling { radius, max_change, fitted_constant: radius * max_change })
}
