use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::realform::RealForm;
use crate::error::{Error, Result};
use crate::torus::{circ_dist, frac, CompactificationMap};
use crate::trigpoly::LaurentPoly;

type P2 = [f64; 2];

/// Minimum gradient norm of the real form along a traced curve.
pub const SINGULAR_GRAD: f64 = 1e-8;
/// Bound on `‖lift_displacement − w‖_∞`.
pub const WINDING_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    /// Seeds come from sign changes on a `seed_grid × seed_grid` grid.
    pub seed_grid: usize,
    /// Nominal arc-length step, in turns.
    pub step: f64,
    pub corrector_tol: f64,
    /// Default `⌈100 / step⌉`.
    pub max_steps: Option<usize>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { seed_grid: 64, step: 1e-3, corrector_tol: 1e-12, max_steps: None }
    }
}

/// One closed component of the zero set on `T²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveComponent {
    /// Lifted samples in `R²`; the last one is the first translated by the winding.
    pub lifted: Vec<P2>,
    /// Unit tangents at the lifted samples, in traversal direction.
    pub tangents: Vec<P2>,
    pub lift_displacement: P2,
    pub winding: [i64; 2],
    /// `−1` if the traversal was reversed to make the normal-form mass nonnegative.
    pub orientation: i8,
    /// Largest `|r|` over samples.
    pub max_residual: f64,
}

impl CurveComponent {
    /// Samples reduced to `[0, 1)²`.
    pub fn samples(&self) -> Vec<P2> {
        self.lifted.iter().map(|p| [frac(p[0]), frac(p[1])]).collect()
    }

    pub fn len(&self) -> usize {
        self.lifted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lifted.is_empty()
    }

    /// Closure gap on the torus between first and last sample.
    pub fn closure_gap(&self) -> f64 {
        let (a, b) = (self.lifted[0], self.lifted[self.lifted.len() - 1]);
        circ_dist(a[0], b[0]).max(circ_dist(a[1], b[1]))
    }

    /// Largest distance between consecutive samples.
    pub fn max_chord(&self) -> f64 {
        self.lifted.windows(2).map(|w| dist(w[0], w[1])).fold(0.0, f64::max)
    }

    pub fn winding_residual(&self) -> f64 {
        (0..2)
            .map(|i| (self.lift_displacement[i] - self.winding[i] as f64).abs())
            .fold(0.0, f64::max)
    }

    fn reverse(&mut self) {
        self.lifted.reverse();
        self.tangents.reverse();
        for t in &mut self.tangents {
            *t = [-t[0], -t[1]];
        }
        self.lift_displacement = [-self.lift_displacement[0], -self.lift_displacement[1]];
        self.winding = [-self.winding[0], -self.winding[1]];
        self.orientation = -self.orientation;
    }
}

fn dist(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn dot(a: P2, b: P2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

struct Tracer<'a> {
    form: &'a RealForm,
    tol: f64,
}

impl Tracer<'_> {
    fn value_grad(&self, p: P2) -> (f64, P2) {
        let (v, g) = self.form.eval_grad(&p);
        (v, [g[0], g[1]])
    }

    /// Newton projection onto `r = 0` along the gradient.
    fn correct(&self, mut p: P2) -> Result<Option<P2>> {
        for _ in 0..12 {
            let (v, g) = self.value_grad(p);
            let gn2 = dot(g, g);
            if gn2.sqrt() < SINGULAR_GRAD {
                return Err(Error::SingularPoint(frac(p[0]), frac(p[1])));
            }
            let s = v / gn2;
            p = [p[0] - s * g[0], p[1] - s * g[1]];
            if (s * gn2.sqrt()).abs() <= self.tol {
                return Ok(Some(p));
            }
        }
        let (v, g) = self.value_grad(p);
        Ok(if v.abs() <= 100.0 * self.tol * dot(g, g).sqrt() { Some(p) } else { None })
    }

    /// Unit tangent at `p` oriented along `prev`.
    fn tangent(&self, p: P2, prev: Option<P2>) -> Result<P2> {
        let (_, g) = self.value_grad(p);
        let n = dot(g, g).sqrt();
        if n < SINGULAR_GRAD {
            return Err(Error::SingularPoint(frac(p[0]), frac(p[1])));
        }
        let t = [-g[1] / n, g[0] / n];
        Ok(match prev {
            Some(q) if dot(t, q) < 0.0 => [-t[0], -t[1]],
            _ => t,
        })
    }

    fn trace(&self, start: P2, opts: &TraceOptions) -> Result<CurveComponent> {
        let h0 = opts.step;
        let max_steps = opts.max_steps.unwrap_or((100.0 / h0).ceil() as usize);
        let t0 = self.tangent(start, None)?;
        let mut pts = vec![start];
        let mut tans = vec![t0];
        let mut arc = 0.0;
        let mut h = h0;
        for _ in 0..max_steps {
            let (p, t) = (pts[pts.len() - 1], tans[tans.len() - 1]);
            let pred = [p[0] + h * t[0], p[1] + h * t[1]];
            let accepted = match self.correct(pred)? {
                Some(q) if dist(q, pred) < 0.5 * h => {
                    let tq = self.tangent(q, Some(t))?;
                    (dot(tq, t) > 0.9).then_some((q, tq))
                }
                _ => None,
            };
            let Some((q, tq)) = accepted else {
                h *= 0.5;
                if h < h0 * 1e-6 {
                    return Err(Error::SingularPoint(frac(p[0]), frac(p[1])));
                }
                continue;
            };
            arc += dist(p, q);
            h = (2.0 * h).min(h0);

            if arc > 3.0 * h0 {
                let d = [q[0] - start[0], q[1] - start[1]];
                let k = [d[0].round(), d[1].round()];
                let e = [d[0] - k[0], d[1] - k[1]];
                let e_prev = [p[0] - start[0] - k[0], p[1] - start[1] - k[1]];
                if e[0].hypot(e[1]) < 3.0 * h0 && dot(e_prev, t0) < 0.0 && dot(e, t0) >= 0.0 {
                    let end = [start[0] + k[0], start[1] + k[1]];
                    let s = -dot(e_prev, t0) / (dot(e, t0) - dot(e_prev, t0));
                    let cross = [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])];
                    let cross = self.correct(cross)?.unwrap_or(cross);
                    let disp = [cross[0] - start[0], cross[1] - start[1]];
                    if dist(p, end) < 1e-3 * h0 {
                        // the previous sample already sits on the closing point
                        pts.pop();
                        tans.pop();
                    }
                    pts.push(end);
                    tans.push(t0);
                    let winding = [k[0] as i64, k[1] as i64];
                    let max_residual = pts.iter().map(|&x| self.form.eval(&x).abs()).fold(0.0, f64::max);
                    return Ok(CurveComponent {
                        lifted: pts,
                        tangents: tans,
                        lift_displacement: disp,
                        winding,
                        orientation: 1,
                        max_residual,
                    });
                }
            }
            pts.push(q);
            tans.push(tq);
        }
        Err(Error::NonClosure { steps: max_steps })
    }
}

/// Zero crossings of `r` on the edges of a lifted grid slightly larger than `[0, 1]²`.
fn seeds(tracer: &Tracer, g: usize) -> Vec<P2> {
    let coord = |i: usize| (i as f64 - 0.5) / g as f64;
    let n = g + 2;
    let vals: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|idx| tracer.form.eval(&[coord(idx / n), coord(idx % n)]))
        .collect();
    let mut out = Vec::new();
    let mut bisect = |a: P2, b: P2, mut fa: f64| {
        let (mut lo, mut hi) = (a, b);
        for _ in 0..60 {
            let mid = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
            let fm = tracer.form.eval(&mid);
            if fm == 0.0 {
                lo = mid;
                break;
            }
            if (fm > 0.0) == (fa > 0.0) {
                lo = mid;
                fa = fm;
            } else {
                hi = mid;
            }
        }
        out.push(lo);
    };
    for i in 0..n {
        for j in 0..n {
            let v = vals[i * n + j];
            let here = [coord(i), coord(j)];
            if i + 1 < n && (v > 0.0) != (vals[(i + 1) * n + j] > 0.0) {
                bisect(here, [coord(i + 1), coord(j)], v);
            }
            if j + 1 < n && (v > 0.0) != (vals[i * n + j + 1] > 0.0) {
                bisect(here, [coord(i), coord(j + 1)], v);
            }
        }
    }
    out
}

/// Samples of traced components bucketed by torus cell.
struct Occupancy {
    g: usize,
    cells: HashMap<(usize, usize), Vec<P2>>,
}

impl Occupancy {
    fn cell(&self, p: P2) -> (usize, usize) {
        let c = |v: f64| ((frac(v) * self.g as f64) as usize).min(self.g - 1);
        (c(p[0]), c(p[1]))
    }

    fn insert(&mut self, p: P2) {
        let key = self.cell(p);
        self.cells.entry(key).or_default().push([frac(p[0]), frac(p[1])]);
    }

    fn near(&self, p: P2, radius: f64) -> bool {
        let (ci, cj) = self.cell(p);
        let g = self.g as isize;
        for di in -1..=1isize {
            for dj in -1..=1isize {
                let key = (((ci as isize + di).rem_euclid(g)) as usize, ((cj as isize + dj).rem_euclid(g)) as usize);
                if let Some(v) = self.cells.get(&key) {
                    if v.iter().any(|q| circ_dist(p[0], q[0]).hypot(circ_dist(p[1], q[1])) < radius) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Traces every component of the real zero set of a self-dual `P` on `T²`
/// reached by the seed grid, oriented so that `N · w ≥ 0` for the normal `N` of `map`.
pub fn trace_components(poly: &LaurentPoly, map: &CompactificationMap, opts: &TraceOptions) -> Result<Vec<CurveComponent>> {
    if poly.m() != 2 || map.m() != 2 || map.n() != 1 {
        return Err(Error::InvalidArgument("curve tracing needs m = 2, n = 1".into()));
    }
    if opts.seed_grid < 2 || !(opts.step > 0.0 && opts.step < 0.1) {
        return Err(Error::InvalidArgument("need seed_grid >= 2 and 0 < step < 0.1".into()));
    }
    let form = RealForm::new(poly)?;
    let tracer = Tracer { form: &form, tol: opts.corrector_tol };
    let normal = [map.normal_entry(0, 0), map.normal_entry(1, 0)];
    let mut occ = Occupancy { g: opts.seed_grid, cells: HashMap::new() };
    let mut comps = Vec::new();
    for seed in seeds(&tracer, opts.seed_grid) {
        let Some(start) = tracer.correct(seed)? else { continue };
        let start = [frac(start[0]), frac(start[1])];
        if occ.near(start, 2.0 * opts.step) {
            continue;
        }
        let mut comp = tracer.trace(start, opts)?;
        if comp.winding_residual() >= WINDING_TOL {
            return Err(Error::NonIntegerWinding { residual: comp.winding_residual() });
        }
        if dot(normal, comp.lift_displacement) < 0.0 {
            comp.reverse();
        }
        for &p in &comp.lifted {
            occ.insert(p);
        }
        comps.push(comp);
    }
    Ok(comps)
}

/// `min |det[t | M]|` over the unit tangents of a component.
pub fn transversality(comp: &CurveComponent, map: &CompactificationMap) -> f64 {
    let (m1, m2) = (map.entry(0, 0), map.entry(1, 0));
    comp.tangents.iter().map(|t| (t[0] * m2 - t[1] * m1).abs()).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::Slope;

    #[test]
    fn vertical_circle() {
        let p = LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[0, 0], -1.0)]).unwrap();
        let map = CompactificationMap::planar(Slope::sqrt2());
        let comps = trace_components(&p, &map, &TraceOptions::default()).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].winding, [0, 1]);
        assert!(comps[0].samples().iter().all(|s| circ_dist(s[0], 0.0) < 1e-12));
        let flat = CompactificationMap::new(2, 1, &[vec![1.0], vec![0.0]]).unwrap();
        assert!((transversality(&comps[0], &flat) - 1.0).abs() < 1e-12);
    }
}
