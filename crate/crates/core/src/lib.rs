//! Fourier quasicrystals and Bohr almost periodic point sets of toral type.
//!
//! A point set `Λ ⊂ R` arising as the real zero set of an exponential polynomial
//! is studied through the compactification `ψ(x) = frac(M x)` into a torus `T^m`:
//! `Λ = ψ⁻¹(K)` where `K` is the real zero set of a Laurent polynomial on `T^m`.
//!
//! * [`torus`]: compactification maps, exact lattice arithmetic, homotopy density.
//! * [`trigpoly`]: Laurent and exponential polynomials, pullback, self-duality, stability.
//! * [`rootfind`]: real roots with multiplicity, argument-principle counts, real-rootedness.
//! * [`curve`]: tracing `K ⊂ T²`, winding vectors, transversality, `κ̂` by line integrals.
//! * [`spectrum`]: Bohr means of point sets, spectrum tables, difference equations.
//! * [`cutproject`]: the strip cut-and-project set and its dilation.
//! * [`cli`]: job runner behind the `fqtorus` binary.

pub mod cli;
pub mod curve;
pub mod cutproject;
pub mod error;
pub mod io;
pub mod rootfind;
pub mod spectrum;
pub mod suite;
pub mod torus;
pub mod trigpoly;

pub use error::{Error, Result};
pub use num_complex::Complex64;
