//! Compactification maps, the irrationality screen and exact lattice data.
//!
//! ```text
//! cargo run --example torus_lattice
//! ```

use fqtorus::torus::{check_rational_independence, default_bound, homotopy_density, CompactificationMap, LatticeSubgroup, Slope};

fn main() -> fqtorus::Result<()> {
    for slope in [Slope::sqrt2(), Slope::golden(), Slope::from_tan(0.75)] {
        let map = CompactificationMap::planar(slope);
        let screen = check_rational_independence(&map, default_bound(&map));
        println!("tan = {slope:<8} screen: {screen:?}");
    }

    let map = CompactificationMap::planar(Slope::sqrt2());
    println!("psi(sqrt 3) = {:?}", map.project(&[3f64.sqrt()]));

    // a rank-one subgroup and its non-primitive multiple share the annihilator
    for w in [vec![1, 2], vec![2, 4]] {
        let s = LatticeSubgroup::new(2, vec![w.clone()])?;
        let term = homotopy_density(&s, &map)?;
        println!(
            "w = {w:?}: index {} annihilator {:?} density {:.6}",
            term.index, term.annihilator, term.density
        );
    }

    let s = LatticeSubgroup::new(3, vec![vec![2, 0, 0], vec![0, 3, 3]])?;
    println!("rank {} projective index {}", s.rank(), s.projective_index()?);
    println!("closure {:?}", s.projective_closure()?);
    Ok(())
}
