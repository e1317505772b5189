//! The complex side: holomorphic bundles in Atiyah normal form, torsion
//! sheaves, theta-section hom bases, and composition of morphisms.

mod compose;
mod desc;
mod hom;
pub(crate) mod section;

pub use compose::{
    compose, compose_closed_scalar, compose_intertwiner_then_section,
    compose_section_then_intertwiner,
};
pub use desc::{BundleDesc, TorsionDesc};
pub use hom::{
    bundle_hom_dim, hom_basis, hom_bundle_torsion, hom_torsion, hom_torsion_bundle,
    riemann_roch_check, HomBasis,
};
pub use section::SectionElement;
