//! Acceptance criteria, one line per criterion. Reference values come from
//! oracles written here rather than from the library.

use std::f64::consts::PI;
use std::process::ExitCode;

use fqtorus::curve::{homotopy_density, kappa_hat_integral, trace_components, transversality, CurveComponent, KappaQuadOptions, KappaQuadrature, TraceOptions};
use fqtorus::cutproject::{dilation_check, generate, CutProjectConfig};
use fqtorus::rootfind::{complex_root_count, is_real_rooted, real_roots, QuadOptions, Rectangle, RootOptions, WeightedPointSet};
use fqtorus::suite::{example1_poly, example2_poly};
use fqtorus::torus::{golden, CompactificationMap, LatticeSubgroup, Slope};
use fqtorus::trigpoly::{ExpPoly1D, LaurentPoly};
use fqtorus::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

/// Roots of a real function on `[-r, r]` counted by sign changes at a fixed step.
fn sign_change_count(f: impl Fn(f64) -> f64, r: f64, h: f64) -> usize {
    let n = (2.0 * r / h).round() as usize;
    let mut count = 0;
    let mut last = 0.0f64;
    for i in 0..=n {
        let v = f(-r + i as f64 * h);
        if v == 0.0 {
            count += 1;
            last = 0.0;
        } else {
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
    }
    count
}

fn bohr_mean(pts: &WeightedPointSet, y: f64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for &(x, c) in pts.points() {
        s += Complex64::from_polar(c as f64, -2.0 * PI * y * x);
    }
    s / (2.0 * pts.radius())
}

fn all_k(kmax: i64) -> impl Iterator<Item = [i64; 2]> {
    (-kmax..=kmax).flat_map(move |a| (-kmax..=kmax).map(move |b| [a, b]))
}

const R: f64 = 500.0;

fn ex1_map() -> (CompactificationMap, f64, f64) {
    let (c, s) = (1.0 / 3f64.sqrt(), (2.0f64 / 3.0).sqrt());
    (CompactificationMap::new(2, 1, &[vec![c], vec![s]]).unwrap(), c, s)
}

fn ex2_map() -> (CompactificationMap, f64, f64) {
    let (c, s) = ((2.0f64 / 3.0).sqrt(), 1.0 / 3f64.sqrt());
    (CompactificationMap::new(2, 1, &[vec![c], vec![s]]).unwrap(), c, s)
}

fn ex1_oracle_count(c: f64, s: f64) -> usize {
    sign_change_count(|x| 4.0 * (PI * (c + s) * x).cos() + 2.0 * (PI * (c - s) * x).cos(), R, 1e-4)
}

fn ex2_oracle_count(c: f64, s: f64, delta: f64) -> usize {
    sign_change_count(|x| (2.0 * PI * c * x).sin() - delta * (2.0 * PI * s * x).sin(), R, 1e-4)
}

fn criterion1() -> Outcome {
    let (map, c, s) = ex1_map();
    let p = example1_poly().pullback(&map).map_err(|e| e.to_string())?;
    let roots = real_roots(&p, -R, R, &RootOptions::default()).map_err(|e| e.to_string())?;
    let oracle = ex1_oracle_count(c, s);
    let density = roots.total_multiplicity() as f64 / (2.0 * R);
    let target = c + s;
    ensure(roots.total_multiplicity() as usize == oracle, format!("root count {} vs sign-change oracle {oracle}", roots.total_multiplicity()))?;
    ensure((density - target).abs() <= 0.01 * target, format!("density {density} vs {target}"))?;
    Ok(format!("density {density:.5} vs cos+sin {target:.5}; {oracle} roots match the sign-change oracle"))
}

fn criterion2() -> Outcome {
    let (map, c, s) = ex1_map();
    let comps = trace_components(&example1_poly(), &map, &TraceOptions::default()).map_err(|e| e.to_string())?;
    ensure(comps.len() == 1, format!("{} components", comps.len()))?;
    let w = comps[0].winding;
    ensure(w == [1, -1] || w == [-1, 1], format!("winding {w:?}"))?;
    let hom = homotopy_density(&comps, &map).map_err(|e| e.to_string())?;
    let formula = (w[0] as f64 * s - w[1] as f64 * c).abs();
    ensure((hom.total_density - formula).abs() < 1e-12, format!("homotopy density {} vs |w1 sin - w2 cos| {formula}", hom.total_density))?;
    let empirical = ex1_oracle_count(c, s) as f64 / (2.0 * R);
    ensure((hom.total_density - empirical).abs() <= 0.01 * empirical, format!("homotopy {} vs empirical {empirical}", hom.total_density))?;
    let margin = transversality(&comps[0], &map);
    ensure(margin > 0.0, format!("transversality margin {margin}"))?;
    Ok(format!("1 component, winding {w:?}, homotopy density {:.6} vs empirical {empirical:.6}", hom.total_density))
}

fn stencil_residual(poly: &LaurentPoly, value: &dyn Fn([i64; 2]) -> Complex64, k: [i64; 2]) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (j, c) in poly.terms() {
        s += c * value([k[0] - j[0], k[1] - j[1]]);
    }
    s.norm()
}

fn criterion3() -> Outcome {
    let (map, _, _) = ex1_map();
    let poly = example1_poly();
    let comps = trace_components(&poly, &map, &TraceOptions::default()).map_err(|e| e.to_string())?;
    let opts = KappaQuadOptions::default();
    let kap = |k: [i64; 2]| kappa_hat_integral(&comps, &map, k, &opts).unwrap();
    let vanish = all_k(5).filter(|k| k[0] * k[1] < 0).map(|k| kap(k).norm()).fold(0.0, f64::max);
    ensure(vanish < 1e-8, format!("largest |kappa_hat| with k1 k2 < 0: {vanish:e}"))?;
    // 2 κ̂(k) + κ̂(k − e1) + κ̂(k − e2) + 2 κ̂(k − e1 − e2)
    let diff = all_k(4)
        .map(|k| {
            (kap(k) * 2.0 + kap([k[0] - 1, k[1]]) + kap([k[0], k[1] - 1]) + kap([k[0] - 1, k[1] - 1]) * 2.0).norm()
        })
        .fold(0.0, f64::max);
    ensure(diff < 1e-8, format!("difference residual {diff:e}"))?;
    let generic = all_k(4).map(|k| stencil_residual(&poly, &kap, k)).fold(0.0, f64::max);
    ensure((generic - diff).abs() < 1e-12, "stencil mismatch".into())?;
    Ok(format!("max |kappa_hat| on k1 k2 < 0: {vanish:.2e}; difference residual {diff:.2e}"))
}

fn cross_validate(poly: &LaurentPoly, map: &CompactificationMap) -> Result<f64, String> {
    let p = poly.pullback(map).map_err(|e| e.to_string())?;
    let roots = real_roots(&p, -R, R, &RootOptions::default()).map_err(|e| e.to_string())?;
    let comps = trace_components(poly, map, &TraceOptions::default()).map_err(|e| e.to_string())?;
    let opts = KappaQuadOptions::default();
    let mut worst: f64 = 0.0;
    for k in all_k(4) {
        let y = map.entry(0, 0) * k[0] as f64 + map.entry(1, 0) * k[1] as f64;
        let a = bohr_mean(&roots, y);
        let b = kappa_hat_integral(&comps, map, k, &opts).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).norm());
    }
    Ok(worst)
}

fn criterion4() -> Outcome {
    let bound = 5.0 / R + 1e-6;
    let e1 = cross_validate(&example1_poly(), &ex1_map().0)?;
    let e2 = cross_validate(&example2_poly(0.5).unwrap(), &ex2_map().0)?;
    ensure(e1 <= bound && e2 <= bound, format!("max deviations {e1:e}, {e2:e} vs bound {bound:e}"))?;
    Ok(format!("max |points - integral| = {e1:.2e} (ex 1), {e2:.2e} (ex 2); bound {bound:.2e}"))
}

fn criterion5() -> Outcome {
    let (map, c, s) = ex2_map();
    let poly = example2_poly(0.5).unwrap();
    let comps = trace_components(&poly, &map, &TraceOptions::default()).map_err(|e| e.to_string())?;
    ensure(comps.len() == 2, format!("{} components", comps.len()))?;
    for comp in &comps {
        ensure(comp.winding == [0, 1] || comp.winding == [0, -1], format!("winding {:?}", comp.winding))?;
    }
    let hom = homotopy_density(&comps, &map).map_err(|e| e.to_string())?;
    ensure((hom.total_density - 2.0 * c).abs() < 1e-12, format!("homotopy density {}", hom.total_density))?;
    let empirical = ex2_oracle_count(c, s, 0.5) as f64 / (2.0 * R);
    ensure((hom.total_density - empirical).abs() <= 0.01 * empirical, format!("homotopy {} vs empirical {empirical}", hom.total_density))?;
    let opts = KappaQuadOptions::default();
    let null = |k: [i64; 2]| (k[1] > -k[0] && -k[0] >= 1) || (k[1] < -k[0] && -k[0] <= 0);
    let mut vanish: f64 = 0.0;
    for k in all_k(5).filter(|&k| null(k)) {
        vanish = vanish.max(kappa_hat_integral(&comps, &map, k, &opts).map_err(|e| e.to_string())?.norm());
    }
    ensure(vanish < 1e-8, format!("largest coefficient in null pattern {vanish:e}"))?;
    Ok(format!("2 components with winding ±(0,1); density {:.6} vs empirical {empirical:.6}; null pattern max {vanish:.2e}", hom.total_density))
}

fn criterion6() -> Outcome {
    let shifted = ExpPoly1D::from_real(&[(1.0, 1.0), (0.0, 2.0)]).unwrap();
    let v = is_real_rooted(&shifted, 100.0, None, &RootOptions::default()).map_err(|e| e.to_string())?;
    ensure(!v.is_real_rooted() && v.rho_real == 0.0 && v.rho_complex == 1.0, format!("{v:?}"))?;
    // the only zero with real part in [0, 1] is 1/2 − i ln 2 / (2π)
    let n = complex_root_count(&shifted, Rectangle::new(0.0, 1.0, -1.0, 1.0), &QuadOptions::default()).map_err(|e| e.to_string())?;
    ensure(n == 1, format!("rectangle count {n}"))?;
    let square = ExpPoly1D::from_real(&[(2.0, 1.0), (1.0, -2.0), (0.0, 1.0)]).unwrap();
    let roots = real_roots(&square, -3.5, 3.5, &RootOptions::default()).map_err(|e| e.to_string())?;
    let want: Vec<(f64, u32)> = (-3..=3).map(|j| (j as f64, 2)).collect();
    ensure(roots.len() == want.len(), format!("{} double roots", roots.len()))?;
    for (got, w) in roots.points().iter().zip(&want) {
        ensure((got.0 - w.0).abs() < 1e-9 && got.1 == 2, format!("root {got:?}"))?;
    }
    Ok("shifted exponential: not real-rooted, rho_r = 0, rho_c = 1, one zero in [0,1]x[-1,1]; square: 7 double roots".into())
}

fn criterion7() -> Outcome {
    let (ell, r) = (1.0, 200.0);
    let cfg = CutProjectConfig::new(Slope::golden(), ell, r).map_err(|e| e.to_string())?;
    let pts = generate(&cfg).map_err(|e| e.to_string())?.points;
    let a = golden();
    let (c, s) = (1.0 / (1.0 + a * a).sqrt(), a / (1.0 + a * a).sqrt());
    // brute-force lattice enumeration
    let mut strip = Vec::new();
    for m in -400i64..=400 {
        for n in -400i64..=400 {
            let (mf, nf) = (m as f64, n as f64);
            let lam = mf * c + nf * s;
            if (mf * s - nf * c).abs() < ell / 2.0 && lam.abs() <= r {
                strip.push((m, n, lam));
            }
        }
    }
    ensure(strip.len() == pts.len(), format!("enumeration {} vs generated {}", strip.len(), pts.len()))?;
    let density = pts.len() as f64 / (2.0 * r);
    ensure((density - ell).abs() <= 0.02 * ell, format!("density {density}"))?;
    let mut worst: f64 = 0.0;
    for k in all_k(4) {
        let x = PI * ell * (-(k[0] as f64) * s + k[1] as f64 * c);
        let closed = if k == [0, 0] { ell } else { ell * x.sin() / x };
        worst = worst.max((bohr_mean(&pts, k[0] as f64 * c + k[1] as f64 * s) - closed).norm());
    }
    ensure(worst < 0.02, format!("closed form vs Bohr mean {worst}"))?;
    let verdict = dilation_check(&pts, a, ell, 1e-9);
    ensure(verdict.is_closed() && verdict.tested > 0, format!("{} violations", verdict.violations.len()))?;
    // algebraic image of (m, n) under the dilation is (n, m + n), which stays in the strip
    for &(m, n, lam) in &strip {
        if (a * lam).abs() <= r - ell {
            let (m2, n2) = ((n) as f64, (m + n) as f64);
            ensure((m2 * s - n2 * c).abs() < ell / 2.0, format!("image of ({m},{n}) leaves the strip"))?;
        }
    }
    Ok(format!("density {density:.4}; max coefficient deviation {worst:.4}; dilation closed on {} points", verdict.tested))
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    // pullback identity
    let (map, _, _) = ex1_map();
    let mut polys = vec![example1_poly(), example2_poly(0.5).unwrap()];
    for _ in 0..3 {
        let terms: Vec<(Vec<i64>, Complex64)> = (0..5)
            .map(|_| (vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)], Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        polys.push(LaurentPoly::new(2, terms).unwrap());
    }
    let mut pull: f64 = 0.0;
    for poly in &polys {
        let p = poly.pullback(&map).unwrap();
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-100.0..100.0);
            let th = [(map.entry(0, 0) * x).rem_euclid(1.0), (map.entry(1, 0) * x).rem_euclid(1.0)];
            let mut direct = Complex64::new(0.0, 0.0);
            for (k, c) in poly.terms() {
                direct += c * Complex64::cis(2.0 * PI * (k[0] as f64 * th[0] + k[1] as f64 * th[1]));
            }
            pull = pull.max((direct - p.eval(x)).norm());
        }
    }
    ensure(pull < 1e-10, format!("pullback identity defect {pull:e}"))?;

    // annihilator exactness
    for _ in 0..200 {
        let m = rng.gen_range(2..=4usize);
        let r = rng.gen_range(1..m);
        let gens: Vec<Vec<i64>> = (0..r).map(|_| (0..m).map(|_| rng.gen_range(-6..=6)).collect()).collect();
        let Ok(sub) = LatticeSubgroup::new(m, gens.clone()) else { continue };
        let e = sub.annihilator_basis().map_err(|e| e.to_string())?;
        for col in &e {
            for g in &gens {
                let dot: i64 = col.iter().zip(g).map(|(a, b)| a * b).sum();
                ensure(dot == 0, format!("E^T S != 0 for {gens:?}"))?;
            }
        }
        ensure(e.len() == m - sub.rank(), format!("annihilator rank {} for {gens:?}", e.len()))?;
    }

    // winding integrality on every traced example
    let cases: Vec<(LaurentPoly, CompactificationMap)> = vec![
        (example1_poly(), ex1_map().0),
        (example2_poly(0.5).unwrap(), ex2_map().0),
        (example2_poly(0.9).unwrap(), ex1_map().0),
        (LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[0, 0], -1.0)]).unwrap(), ex1_map().0),
    ];
    let mut traced: Vec<(Vec<CurveComponent>, CompactificationMap)> = Vec::new();
    let mut wres: f64 = 0.0;
    for (poly, map) in &cases {
        let comps = trace_components(poly, map, &TraceOptions::default()).map_err(|e| e.to_string())?;
        for c in &comps {
            let d = c.lift_displacement;
            wres = wres.max((d[0] - d[0].round()).abs()).max((d[1] - d[1].round()).abs());
        }
        traced.push((comps, map.clone()));
    }
    ensure(wres < 0.01, format!("winding residual {wres}"))?;

    // rectangle additivity
    let p = example1_poly().pullback(&ex1_map().0).unwrap();
    for _ in 0..20 {
        let (a, b) = (rng.gen_range(-20.0..0.0), rng.gen_range(0.5..20.0));
        let (lo, hi) = (rng.gen_range(-1.5..-0.1), rng.gen_range(0.1..1.5));
        let split = rng.gen_range(a + 0.1..b - 0.1);
        let q = QuadOptions::default();
        let whole = complex_root_count(&p, Rectangle::new(a, b, lo, hi), &q).map_err(|e| e.to_string())?;
        let left = complex_root_count(&p, Rectangle::new(a, split, lo, hi), &q).map_err(|e| e.to_string())?;
        let right = complex_root_count(&p, Rectangle::new(split, b, lo, hi), &q).map_err(|e| e.to_string())?;
        ensure(whole == left + right, format!("{whole} != {left} + {right} on [{a}, {b}] split at {split}"))?;
    }

    // refinement stability
    let mut refine: f64 = 0.0;
    for ((poly, map), (coarse, _)) in cases.iter().zip(&traced) {
        let fine = trace_components(poly, map, &TraceOptions { step: 5e-4, ..Default::default() }).map_err(|e| e.to_string())?;
        ensure(fine.len() == coarse.len(), "component count changed under refinement".into())?;
        for (a, b) in coarse.iter().zip(&fine) {
            ensure(a.winding == b.winding, "winding changed under refinement".into())?;
        }
        let (qa, qb) = (KappaQuadrature::new(coarse, map), KappaQuadrature::new(&fine, map));
        for k in all_k(5) {
            refine = refine.max((qa.eval(k).0 - qb.eval(k).0).norm());
        }
    }
    ensure(refine < 1e-9, format!("refinement change {refine:e}"))?;
    Ok(format!("pullback {pull:.1e}; annihilators exact; winding residual {wres:.1e}; additivity holds; refinement {refine:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("example 1 root density", criterion1),
        ("example 1 topology and homotopy density", criterion2),
        ("example 1 coefficient structure", criterion3),
        ("point vs integral coefficients", criterion4),
        ("example 2 components, density and null pattern", criterion5),
        ("density certificate and multiplicities", criterion6),
        ("cut-and-project density, coefficients, dilation", criterion7),
        ("property suites", criterion8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = std::time::Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match out {
            Ok(detail) => println!("criterion {} PASS [{name}] {detail} ({:.1}s)", i + 1, t.elapsed().as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL [{name}] {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
