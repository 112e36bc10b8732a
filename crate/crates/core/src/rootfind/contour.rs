use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::winding::phase_change;
use crate::error::{Error, Result};
use crate::trigpoly::ExpPoly1D;

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rectangle {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rectangle { x0, x1, y0, y1 }
    }

    /// `[a, b] × [−h, h]`.
    pub fn strip(a: f64, b: f64, h: f64) -> Self {
        Rectangle { x0: a, x1: b, y0: -h, y1: h }
    }

    fn dilate(&self, d: f64) -> Self {
        Rectangle { x0: self.x0 - d, x1: self.x1 + d, y0: self.y0 - d, y1: self.y1 + d }
    }
}

/// Options for the argument-principle count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    /// Initial samples per unit length, scaled by the bandwidth.
    pub samples_per_period: f64,
    /// `|p|` below this on the contour counts as a root on the contour.
    pub min_abs: f64,
    pub max_retries: usize,
    pub dilation: f64,
    /// Rounding residual that is still accepted.
    pub max_residual: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { samples_per_period: 20.0, min_abs: 1e-9, max_retries: 5, dilation: 1e-6, max_residual: 0.05 }
    }
}

/// Number of zeros (with multiplicity) of the entire extension of `p` inside `rect`,
/// by phase tracking along the counterclockwise boundary.
pub fn complex_root_count(p: &ExpPoly1D, rect: Rectangle, opts: &QuadOptions) -> Result<i64> {
    if !(rect.x1 > rect.x0 && rect.y1 > rect.y0) {
        return Err(Error::InvalidArgument("empty rectangle".into()));
    }
    let bw = p.bandwidth().max(1e-3);
    let mut r = rect;
    for attempt in 0..=opts.max_retries {
        match boundary_phase(p, r, bw, opts) {
            Ok(total) => {
                let w = total / (2.0 * std::f64::consts::PI);
                let rounded = w.round();
                let residual = (w - rounded).abs();
                if residual >= opts.max_residual {
                    return Err(Error::WindingResidual { winding: w, residual });
                }
                return Ok(rounded as i64);
            }
            Err(()) => {
                r = rect.dilate(opts.dilation * (attempt + 1) as f64);
            }
        }
    }
    Err(Error::ContourRoot { retries: opts.max_retries })
}

fn boundary_phase(p: &ExpPoly1D, r: Rectangle, bw: f64, opts: &QuadOptions) -> std::result::Result<f64, ()> {
    let corners = [
        Complex64::new(r.x0, r.y0),
        Complex64::new(r.x1, r.y0),
        Complex64::new(r.x1, r.y1),
        Complex64::new(r.x0, r.y1),
    ];
    let mut total = 0.0;
    for i in 0..4 {
        let (za, zb) = (corners[i], corners[(i + 1) % 4]);
        let len = (zb - za).norm();
        let init = ((len * bw * opts.samples_per_period).ceil() as usize).max(16);
        let f = |t: f64| p.eval_entire(za + (zb - za) * t);
        total += phase_change(&f, 0.0, 1.0, init, opts.min_abs).map_err(|_| ())?;
    }
    Ok(total)
}
