//! Laurent polynomials on `T^m`, exponential polynomials on `R`, and the pullback between them.

mod exppoly;
mod laurent;
mod stability;

pub use exppoly::{ExpPoly1D, COEFF_DROP_TOL, FREQ_MERGE_TOL};
pub use laurent::{LaurentPoly, SelfDuality};
pub use stability::{poly_roots, Stability};
