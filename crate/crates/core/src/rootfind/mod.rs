//! Real and complex zeros of exponential polynomials.

mod certify;
mod contour;
mod real;
pub mod winding;

pub use certify::{density_complex, is_real_rooted, strip_height, RealRootedness, RootednessVerdict};
pub use contour::{complex_root_count, QuadOptions, Rectangle};
pub use real::{real_roots, FlaggedRoot, RootOptions, WeightedPointSet};
