//! Pulls a Laurent polynomial back along a line and finds the real zero set.
//!
//! ```text
//! cargo run --example pullback_roots
//! ```

use fqtorus::rootfind::{real_roots, RootOptions};
use fqtorus::torus::{CompactificationMap, Slope};
use fqtorus::trigpoly::{ExpPoly1D, LaurentPoly};

fn main() -> fqtorus::Result<()> {
    // 2 z1 z2 + z1 + z2 + 2
    let poly = LaurentPoly::from_real(2, &[(&[1, 1], 2.0), (&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 2.0)])?;
    let map = CompactificationMap::planar(Slope::sqrt2());
    let f = poly.pullback(&map)?;
    for (y, c) in f.terms() {
        println!("frequency {y:.6}  coefficient {c}");
    }

    let pts = real_roots(&f, 0.0, 20.0, &RootOptions::default())?;
    println!("{} zeros in [0, 20], min gap {:.4}", pts.len(), pts.min_gap().unwrap_or(f64::NAN));
    for (x, mult) in pts.points().iter().take(6) {
        println!("  {x:.12}  x{mult}  |f| = {:.1e}", f.eval(*x).norm());
    }

    // a double zero at every integer
    let sq = ExpPoly1D::from_real(&[(2.0, 1.0), (1.0, -2.0), (0.0, 1.0)])?;
    let doubled = real_roots(&sq, -1.5, 1.5, &RootOptions::default())?;
    println!("(e(x) - 1)^2 on [-1.5, 1.5]: {:?}", doubled.points());
    Ok(())
}
