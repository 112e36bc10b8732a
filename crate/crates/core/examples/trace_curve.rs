//! Traces the real zero curve on the 2-torus and reads off its homotopy data.
//!
//! ```text
//! cargo run --example trace_curve
//! ```

use fqtorus::curve::{homotopy_density, trace_components, transversality, TraceOptions};
use fqtorus::torus::{CompactificationMap, Slope};
use fqtorus::trigpoly::LaurentPoly;

fn main() -> fqtorus::Result<()> {
    let poly = LaurentPoly::from_real(2, &[(&[1, 1], 2.0), (&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 2.0)])?;
    for slope in [Slope::sqrt2(), Slope::from_tan(-1.0)] {
        let map = CompactificationMap::planar(slope);
        let comps = trace_components(&poly, &map, &TraceOptions::default())?;
        let data = homotopy_density(&comps, &map)?;
        println!("tan = {slope}: {} component(s), density {:.6}", comps.len(), data.total_density);
        for (c, h) in comps.iter().zip(&data.components) {
            println!(
                "  winding {:?}  samples {}  closure gap {:.1e}  transversality {:.2e}  annihilator {:?}",
                h.winding,
                c.len(),
                c.closure_gap(),
                transversality(c, &map),
                h.annihilator
            );
        }
    }
    Ok(())
}
