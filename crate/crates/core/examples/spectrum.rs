//! Fourier coefficients of a zero set by two routes, and the difference equation
//! they satisfy.
//!
//! ```text
//! cargo run --release --example spectrum
//! ```

use fqtorus::curve::{trace_components, KappaQuadOptions, TraceOptions};
use fqtorus::rootfind::{real_roots, RootOptions};
use fqtorus::spectrum::{difference_residual, scan_table, table_from_curve, table_from_points};
use fqtorus::torus::{CompactificationMap, Slope};
use fqtorus::trigpoly::LaurentPoly;

fn main() -> fqtorus::Result<()> {
    let poly = LaurentPoly::from_real(2, &[(&[1, 1], 2.0), (&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 2.0)])?;
    let map = CompactificationMap::planar(Slope::sqrt2());

    let pts = real_roots(&poly.pullback(&map)?, -1000.0, 1000.0, &RootOptions::default())?;
    let by_points = table_from_points(&pts, &map, 4)?;
    let comps = trace_components(&poly, &map, &TraceOptions::default())?;
    let by_curve = table_from_curve(&comps, &map, 4, &KappaQuadOptions::default())?;

    println!("{:>8} {:>12} {:>12}", "k", "points", "curve");
    for k in [[0, 0], [1, 0], [0, 1], [1, 1], [1, -1], [2, 1]] {
        println!("{:>8} {:>12.6} {:>12.6}", format!("{k:?}"), by_points.value(&k).unwrap().re, by_curve.value(&k).unwrap().re);
    }

    println!("difference residual, points: {:.2e}", difference_residual(&poly, &by_points)?.max);
    println!("difference residual, curve:  {:.2e}", difference_residual(&poly, &by_curve)?.max);

    let scan = scan_table(by_curve, 1e-6);
    let nulls = scan.null_mask.iter().filter(|&&z| z).count();
    println!("{} of {} coefficients vanish; {:?}", nulls, scan.table.len(), scan.classification);
    Ok(())
}
