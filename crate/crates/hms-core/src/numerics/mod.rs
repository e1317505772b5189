//! Theta series, nilpotent matrix exponentials and intertwiner kernels.

mod nilpotent;
mod sylvester;
mod theta;

pub use nilpotent::{nilpotent_exp, NilpotentMatrix};
pub use sylvester::{sylvester_kernel, sylvester_residual};
pub use theta::{
    theta_deriv_eval, theta_deriv_eval_full, theta_eval, theta_eval_full, ThetaEval, ThetaParams,
    DERIV_ORDER_CAP,
};

use crate::C64;

/// Shared torus parameter `τ = b + iA`: B-field flux `b` and symplectic
/// area `A` per fundamental domain. The complex side reads the same value as
/// the modulus of `E_τ = C/<1,τ>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusModulus {
    pub b_field: f64,
    pub area: f64,
}

impl TorusModulus {
    /// Requires `area > 0` so that `Im τ > 0`.
    pub fn new(b_field: f64, area: f64) -> crate::Result<Self> {
        if area.is_nan() || area <= 0.0 || !area.is_finite() || !b_field.is_finite() {
            return Err(crate::Error::Malformed(format!(
                "torus modulus needs finite b and area > 0, got b={b_field}, A={area}"
            )));
        }
        Ok(Self { b_field, area })
    }

    pub fn tau(&self) -> C64 {
        C64::new(self.b_field, self.area)
    }

    /// `q = e^{2πiτ}`.
    pub fn q(&self) -> C64 {
        (C64::i() * std::f64::consts::TAU * self.tau()).exp()
    }
}
