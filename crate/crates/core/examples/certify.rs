//! Real-rootedness: compares the real and complex zero densities.
//!
//! ```text
//! cargo run --example certify
//! ```

use fqtorus::rootfind::{complex_root_count, is_real_rooted, QuadOptions, Rectangle, RootOptions};
use fqtorus::torus::{CompactificationMap, Slope};
use fqtorus::trigpoly::{ExpPoly1D, LaurentPoly};

fn main() -> fqtorus::Result<()> {
    // e(x) + 2 vanishes only at Im z = −ln 2 / 2π
    let shifted = ExpPoly1D::from_real(&[(1.0, 1.0), (0.0, 2.0)])?;
    let rect = Rectangle::new(0.0, 10.0, -1.0, 1.0);
    println!("zeros of e(x) + 2 in [0,10]x[-1,1]: {}", complex_root_count(&shifted, rect, &QuadOptions::default())?);
    let v = is_real_rooted(&shifted, 50.0, None, &RootOptions::default())?;
    println!("e(x) + 2: {:?}, rho_r {:.3} rho_c {:.3}", v.verdict, v.rho_real, v.rho_complex);

    for (slope, delta) in [(Slope::inv_sqrt2(), 0.5), (Slope::sqrt2(), 0.9)] {
        let map = CompactificationMap::planar(slope);
        // z1 − z1⁻¹ − δ (z2 − z2⁻¹)
        let p = LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[-1, 0], -1.0), (&[0, 1], -delta), (&[0, -1], delta)])?;
        let v = is_real_rooted(&p.pullback(&map)?, 500.0, None, &RootOptions::default())?;
        println!(
            "tan {slope}, delta {delta}: {:?}, rho_r {:.4} rho_c {:.4} (tol {:.4}); {}",
            v.verdict, v.rho_real, v.rho_complex, v.tol, v.note
        );
    }
    Ok(())
}
