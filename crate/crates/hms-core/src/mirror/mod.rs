//! The mirror functor, the isogeny functors on both sides, and the
//! verification harness that checks the construction quantitatively.

mod functor;
mod isogeny;
mod verify;

pub use functor::{
    phi_bundle, phi_bundle_torsion_morphism, phi_morphism, phi_object, phi_section, phi_torsion,
    MirrorPair, SheafObject,
};
pub use isogeny::{pullback_brane, pullback_bundle, pushforward_brane, pushforward_bundle};
pub use verify::{
    functoriality_residual, sample_functoriality_cases, verify_addition_formula, verify_all,
    verify_dimension_laws, verify_functoriality, verify_isogeny, verify_sections,
    verify_simple_example, verify_theta_identities, verify_torsion, FunctorialityCase,
    VerificationReport,
};
