//! Real zero sets of self-dual Laurent polynomials on `T²`: tracing, homotopy data, and `κ̂`.

mod kappa;
mod realform;
mod trace;

use serde::{Deserialize, Serialize};

pub use kappa::{kappa_hat_integral, KappaQuadOptions, KappaQuadrature};
pub use realform::{RealForm, SELF_DUAL_TOL};
pub use trace::{trace_components, transversality, CurveComponent, TraceOptions, SINGULAR_GRAD, WINDING_TOL};

use crate::error::{Error, Result};
use crate::torus::{self, CompactificationMap, LatticeSubgroup};

/// Homotopy data of one component: `S = ⟨w⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentHomotopy {
    pub winding: [i64; 2],
    pub index: u64,
    /// Columns of the annihilator basis `E`.
    pub annihilator: Vec<Vec<i64>>,
    /// `index · |det EᵀM|`.
    pub density_contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotopyData {
    pub components: Vec<ComponentHomotopy>,
    pub total_density: f64,
}

/// Density of the pulled-back zero set from the winding vectors of `comps`.
/// For `m = 2` each term equals `|w₁ sin θ − w₂ cos θ|`.
pub fn homotopy_density(comps: &[CurveComponent], map: &CompactificationMap) -> Result<HomotopyData> {
    let mut components = Vec::with_capacity(comps.len());
    for c in comps {
        if c.winding == [0, 0] {
            return Err(Error::TrivialHomotopy);
        }
        let s = LatticeSubgroup::new(2, vec![c.winding.to_vec()])?;
        let term = torus::homotopy_density(&s, map)?;
        components.push(ComponentHomotopy {
            winding: c.winding,
            index: term.index,
            annihilator: term.annihilator,
            density_contribution: term.density,
        });
    }
    let total_density = components.iter().map(|c| c.density_contribution).sum();
    Ok(HomotopyData { components, total_density })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::Slope;
    use crate::trigpoly::LaurentPoly;

    fn ex1() -> LaurentPoly {
        LaurentPoly::from_real(2, &[(&[1, 1], 2.0), (&[1, 0], 1.0), (&[0, 1], 1.0), (&[0, 0], 2.0)]).unwrap()
    }

    fn ex2(delta: f64) -> LaurentPoly {
        LaurentPoly::from_real(2, &[(&[1, 0], 1.0), (&[-1, 0], -1.0), (&[0, 1], -delta), (&[0, -1], delta)])
            .unwrap()
    }

    #[test]
    fn single_diagonal_component() {
        let map = CompactificationMap::planar(Slope::sqrt2());
        let comps = trace_components(&ex1(), &map, &TraceOptions::default()).unwrap();
        assert_eq!(comps.len(), 1);
        let w = comps[0].winding;
        assert!(w == [1, -1] || w == [-1, 1], "{w:?}");
        assert!(comps[0].winding_residual() < 1e-9);
        assert!(comps[0].max_residual < 1e-10);
        assert!(transversality(&comps[0], &map) > 0.0);
        let h = homotopy_density(&comps, &map).unwrap();
        let (c, s) = (Slope::sqrt2().cos(), Slope::sqrt2().sin());
        assert!((h.total_density - (c + s)).abs() < 1e-12);
        let q = KappaQuadrature::new(&comps, &map);
        let (k0, _) = q.eval([0, 0]);
        assert!((k0.re - (c + s)).abs() < 1e-12 && k0.im.abs() < 1e-12);
        let (v, est) = q.eval([1, -2]);
        assert!(v.norm() < 1e-8, "{v} {est}");
    }

    #[test]
    fn two_vertical_components() {
        let map = CompactificationMap::planar(Slope::inv_sqrt2());
        let comps = trace_components(&ex2(0.5), &map, &TraceOptions::default()).unwrap();
        assert_eq!(comps.len(), 2);
        for c in &comps {
            assert!(c.winding == [0, 1] || c.winding == [0, -1]);
        }
        let h = homotopy_density(&comps, &map).unwrap();
        assert!((h.total_density - 2.0 * Slope::inv_sqrt2().cos()).abs() < 1e-12);
        let v = kappa_hat_integral(&comps, &map, [-1, 2], &KappaQuadOptions::default()).unwrap();
        assert!(v.norm() < 1e-8, "{v}");
    }

    #[test]
    fn tangency_with_foliation() {
        let map = CompactificationMap::planar(Slope::from_tan(-1.0));
        let comps = trace_components(&ex1(), &map, &TraceOptions::default()).unwrap();
        assert!(transversality(&comps[0], &map) < 1e-2);
    }
}
