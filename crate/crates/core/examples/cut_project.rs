//! The strip cut-and-project set: density, coefficients, golden dilation.
//!
//! ```text
//! cargo run --release --example cut_project
//! ```

use fqtorus::cutproject::{dilation_check, generate, kappa_coeff_closed_form, CutProjectConfig};
use fqtorus::spectrum::kappa_hat_points;
use fqtorus::torus::{golden, Slope};

fn main() -> fqtorus::Result<()> {
    let cfg = CutProjectConfig::new(Slope::golden(), 1.0, 200.0)?;
    let set = generate(&cfg)?;
    let pts = &set.points;
    println!("{} points in [-200, 200], density {:.4}, merged {}", pts.len(), pts.density(), set.merged);

    let map = cfg.map();
    for k in [[0, 0], [1, 0], [1, 1], [2, -1]] {
        let numeric = kappa_hat_points(pts, &map, &k)?.value.re;
        println!("k = {k:?}: Bohr mean {numeric:+.4}, closed form {:+.4}", kappa_coeff_closed_form(&cfg, k));
    }

    let v = dilation_check(pts, golden(), 2.0 * golden(), 1e-9);
    println!("golden dilation: {} tested, {} violations", v.tested, v.violations.len());

    let other = generate(&CutProjectConfig::new(Slope::sqrt2(), 1.0, 200.0)?)?;
    let v = dilation_check(&other.points, golden(), 2.0 * golden(), 1e-9);
    println!("sqrt2 slope: {} tested, {} violations", v.tested, v.violations.len());
    Ok(())
}
