use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::trace::CurveComponent;
use crate::error::{Error, Result};
use crate::torus::CompactificationMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaQuadOptions {
    /// Largest accepted difference between the 5- and 3-node rules.
    pub tol: f64,
}

impl Default for KappaQuadOptions {
    fn default() -> Self {
        KappaQuadOptions { tol: 1e-8 }
    }
}

const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

const GL3: [(f64, f64); 3] = [
    (0.0, 8.0 / 9.0),
    (-0.774_596_669_241_483_4, 0.555_555_555_555_555_6),
    (0.774_596_669_241_483_4, 0.555_555_555_555_555_6),
];

/// Weighted nodes `(θ, w)` with `∮ f ξ_N ≈ Σ w f(θ)` along cubic Hermite
/// segments through the traced samples.
#[derive(Debug, Clone)]
pub struct KappaQuadrature {
    fine: Vec<([f64; 2], f64)>,
    coarse: Vec<([f64; 2], f64)>,
}

fn hermite(p0: [f64; 2], t0: [f64; 2], p1: [f64; 2], t1: [f64; 2], s: f64) -> ([f64; 2], [f64; 2]) {
    let len = (p1[0] - p0[0]).hypot(p1[1] - p0[1]);
    let (s2, s3) = (s * s, s * s * s);
    let (h00, h10, h01, h11) = (2.0 * s3 - 3.0 * s2 + 1.0, s3 - 2.0 * s2 + s, -2.0 * s3 + 3.0 * s2, s3 - s2);
    let (d00, d10, d01, d11) = (6.0 * s2 - 6.0 * s, 3.0 * s2 - 4.0 * s + 1.0, -6.0 * s2 + 6.0 * s, 3.0 * s2 - 2.0 * s);
    let mut pos = [0.0; 2];
    let mut der = [0.0; 2];
    for i in 0..2 {
        pos[i] = h00 * p0[i] + h10 * len * t0[i] + h01 * p1[i] + h11 * len * t1[i];
        der[i] = d00 * p0[i] + d10 * len * t0[i] + d01 * p1[i] + d11 * len * t1[i];
    }
    (pos, der)
}

impl KappaQuadrature {
    pub fn new(comps: &[CurveComponent], map: &CompactificationMap) -> Self {
        let normal = [map.normal_entry(0, 0), map.normal_entry(1, 0)];
        let build = |rule: &[(f64, f64)]| {
            let mut nodes = Vec::new();
            for c in comps {
                for i in 0..c.lifted.len() - 1 {
                    let (p0, p1) = (c.lifted[i], c.lifted[i + 1]);
                    let (t0, t1) = (c.tangents[i], c.tangents[i + 1]);
                    for &(x, w) in rule {
                        let (pos, der) = hermite(p0, t0, p1, t1, 0.5 * (x + 1.0));
                        nodes.push((pos, 0.5 * w * (normal[0] * der[0] + normal[1] * der[1])));
                    }
                }
            }
            nodes
        };
        KappaQuadrature { fine: build(&GL5), coarse: build(&GL3) }
    }

    fn sum(nodes: &[([f64; 2], f64)], k: [i64; 2]) -> Complex64 {
        nodes
            .iter()
            .map(|(p, w)| Complex64::cis(-2.0 * PI * (k[0] as f64 * p[0] + k[1] as f64 * p[1])) * *w)
            .sum()
    }

    /// `(value, error estimate)`.
    pub fn eval(&self, k: [i64; 2]) -> (Complex64, f64) {
        let fine = Self::sum(&self.fine, k);
        let coarse = Self::sum(&self.coarse, k);
        (fine, (fine - coarse).norm())
    }
}

/// `Σ_comp ∮ exp(−2πi kᵀθ) ξ_N` over the traced components, where
/// `ξ_N = N₁ dθ₁ + N₂ dθ₂` (for a planar map, `−sin θ dθ₁ + cos θ dθ₂`).
pub fn kappa_hat_integral(
    comps: &[CurveComponent],
    map: &CompactificationMap,
    k: [i64; 2],
    opts: &KappaQuadOptions,
) -> Result<Complex64> {
    let (v, est) = KappaQuadrature::new(comps, map).eval(k);
    if est > opts.tol {
        return Err(Error::Quadrature { estimate: est });
    }
    Ok(v)
}
