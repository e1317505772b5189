//! Both sides of homological mirror symmetry for an elliptic curve, at desk
//! scale and in floating point.
//!
//! The torus is parameterized by `τ = b + iA` (B-field and symplectic area).
//! On the symplectic side ([`fukaya`]) objects are graded geodesics with flat
//! local systems and composition is a weighted count of immersed triangles.
//! On the complex side ([`sheaves`]) objects are holomorphic bundles in Atiyah
//! normal form (and torsion sheaves), with hom spaces spanned by translated
//! theta functions. The functor between them lives in [`mirror`] together
//! with verification sweeps that check it preserves composition, dimensions,
//! Serre duality and the isogeny functors.
//!
//! All computations are pure functions of their value inputs; sweeps may run
//! in parallel (feature `parallel`, on by default) without changing results.

pub mod error;
pub mod exec;
pub mod fukaya;
pub mod mirror;
pub mod numerics;
pub mod sheaves;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix (fiber maps, monodromies, intertwiners).
pub type CMat = nalgebra::DMatrix<C64>;
/// Exact rational used for intercepts, twists and characteristics.
pub type Rat = num_rational::Rational64;

/// Reduce a rational into `[0, 1)`.
pub fn frac(r: Rat) -> Rat {
    r - r.floor()
}

/// Reduce a real into `[0, 1)`.
pub fn fracf(x: f64) -> f64 {
    let y = x - x.floor();
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

pub(crate) fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
