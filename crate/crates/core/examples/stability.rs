//! Sampled polydisk stability and self-duality of Laurent polynomials.
//!
//! ```text
//! cargo run --example stability
//! ```

use fqtorus::trigpoly::LaurentPoly;

fn main() -> fqtorus::Result<()> {
    let cases = [
        ("2 z1 z2 + z1 + z2 + 2", LaurentPoly::from_real(2, &[(&[1, 1], 2.0), (&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 2.0)])?),
        ("z1 z2 - 1/4", LaurentPoly::from_real(2, &[(&[1, 1], 1.0), (&[0, 0], -0.25)])?),
        ("z1 + 2", LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[0, 0], 2.0)])?),
    ];
    for (name, p) in &cases {
        println!("{name}");
        println!("  self-dual: {:?}", p.is_self_dual(1e-12));
        println!("  stability: {:?}", p.is_stable_sampled(64, 1e-9)?);
    }
    Ok(())
}
