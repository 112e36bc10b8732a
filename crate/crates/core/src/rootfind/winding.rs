//! Phase tracking along paths in the complex plane.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Phase step above which a path segment is bisected.
const MAX_PHASE_STEP: f64 = PI / 8.0;
const MAX_DEPTH: u32 = 48;

/// The function came closer to zero than the allowed floor at parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourHit {
    pub t: f64,
}

/// Total change of `arg f(t)` for `t` from `t0` to `t1`, with `init` initial
/// samples refined adaptively until every phase step is below π/8.
pub fn phase_change<F>(f: &F, t0: f64, t1: f64, init: usize, min_abs: f64) -> Result<f64, ContourHit>
where
    F: Fn(f64) -> Complex64,
{
    let init = init.max(2);
    let mut total = 0.0;
    let mut ta = t0;
    let mut fa = f(t0);
    if fa.norm() < min_abs {
        return Err(ContourHit { t: t0 });
    }
    for i in 1..=init {
        let tb = if i == init { t1 } else { t0 + (t1 - t0) * i as f64 / init as f64 };
        let fb = f(tb);
        if fb.norm() < min_abs {
            return Err(ContourHit { t: tb });
        }
        total += refine(f, ta, fa, tb, fb, min_abs, 0)?;
        ta = tb;
        fa = fb;
    }
    Ok(total)
}

fn refine<F>(f: &F, ta: f64, fa: Complex64, tb: f64, fb: Complex64, min_abs: f64, depth: u32) -> Result<f64, ContourHit>
where
    F: Fn(f64) -> Complex64,
{
    let d = (fb / fa).arg();
    if d.abs() <= MAX_PHASE_STEP || depth >= MAX_DEPTH {
        return Ok(d);
    }
    let tm = 0.5 * (ta + tb);
    let fm = f(tm);
    if fm.norm() < min_abs {
        return Err(ContourHit { t: tm });
    }
    Ok(refine(f, ta, fa, tm, fm, min_abs, depth + 1)? + refine(f, tm, fm, tb, fb, min_abs, depth + 1)?)
}

/// Winding number (unrounded) of `f` around the circle `|z − center| = radius`.
pub fn circle_winding<F>(f: &F, center: Complex64, radius: f64, min_abs: f64) -> Result<f64, ContourHit>
where
    F: Fn(Complex64) -> Complex64,
{
    let g = |t: f64| f(center + Complex64::from_polar(radius, 2.0 * PI * t));
    Ok(phase_change(&g, 0.0, 1.0, 64, min_abs)? / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_counts_poly_roots() {
        let f = |z: Complex64| (z - 0.1) * (z - 0.1) * (z + Complex64::new(0.0, 0.2));
        let w = circle_winding(&f, Complex64::default(), 0.5, 1e-12).unwrap();
        assert!((w - 3.0).abs() < 1e-9);
        let w = circle_winding(&f, Complex64::new(0.1, 0.0), 0.05, 1e-12).unwrap();
        assert!((w - 2.0).abs() < 1e-9);
    }

    #[test]
    fn contour_hit_reported() {
        let f = |z: Complex64| z - 1.0;
        assert!(circle_winding(&f, Complex64::default(), 1.0, 1e-9).is_err());
    }
}
