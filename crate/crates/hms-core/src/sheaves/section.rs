//! Hom-space elements on the complex side: matrix-valued linear combinations
//! of translated theta basis functions, with the nilpotent Ψ-twist applied at
//! evaluation time.

use crate::numerics::{theta_deriv_eval, ThetaParams, TorusModulus};
use crate::sheaves::BundleDesc;
use crate::{rat_f64, CMat, Error, Rat, Result, C64};
use std::f64::consts::PI;

/// An element of `Hom(A1, A2) ≅ H^0(L(φ1^{-1}φ2)) ⊗ Hom(V1, V2)`, stored as
/// one matrix coefficient per theta basis index `j ∈ Z/k`:
///
/// ```text
/// s = Ψ( Σ_j  t*_{δτ+β} f_j^{(k)} ⊗ C_j ),   k = n2 - n1 > 0,
/// ```
///
/// where `Ψ = exp(D·N_hom/k)` and `N_hom(C) = N2·C - C·N1`. Evaluation
/// expands `Ψ` as a finite sum of `D`-derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionElement {
    pub source: BundleDesc,
    pub target: BundleDesc,
    pub coeffs: Vec<CMat>,
}

/// Theta parameters of basis function `j` of `Hom(source, target)`: the
/// series lives at modulus `k·(rτ)` with translation `k(δ·rτ + β)`, both
/// expressed here against the base `τ`.
pub(crate) fn hom_theta_params(source: &BundleDesc, target: &BundleDesc, j: usize) -> ThetaParams {
    let k = target.degree - source.degree;
    debug_assert!(k > 0);
    let r = source.level as i64;
    let delta = (target.twist_a - source.twist_a) / Rat::from_integer(k);
    let beta = (target.twist_b - source.twist_b) / k as f64;
    ThetaParams::new(Rat::new(j as i64, k), (k * r) as u32, k as u32)
        .expect("k >= 1")
        .with_translation((k * r) as f64 * rat_f64(delta), k as f64 * beta)
}

impl SectionElement {
    pub fn new(source: BundleDesc, target: BundleDesc, coeffs: Vec<CMat>) -> Result<Self> {
        if source.level != target.level {
            return Err(Error::LevelMismatch(source.level, target.level));
        }
        let k = target.degree - source.degree;
        if k <= 0 {
            return Err(Error::DegreeMismatch(format!(
                "sections need positive hom degree, got k = {k}"
            )));
        }
        if coeffs.len() != k as usize {
            return Err(Error::DimensionMismatch(format!(
                "expected {k} theta coefficients, got {}",
                coeffs.len()
            )));
        }
        let (d2, d1) = (target.fiber_dim(), source.fiber_dim());
        if coeffs.iter().any(|c| c.nrows() != d2 || c.ncols() != d1) {
            return Err(Error::DimensionMismatch(format!(
                "coefficients must be {d2}x{d1}"
            )));
        }
        Ok(Self {
            source,
            target,
            coeffs,
        })
    }

    pub fn k(&self) -> i64 {
        self.target.degree - self.source.degree
    }

    /// τ-component of the hom translation `δ21 = (a2 - a1)/k`, in base-τ
    /// units. Kept as the raw difference of the canonical twists: integer
    /// shifts of δ change basis functions by a scalar, so one fixed
    /// representative is used everywhere.
    pub fn delta(&self) -> Rat {
        (self.target.twist_a - self.source.twist_a) / Rat::from_integer(self.k())
    }

    /// Real component `β21 = (b2 - b1)/k`.
    pub fn beta(&self) -> f64 {
        (self.target.twist_b - self.source.twist_b) / self.k() as f64
    }

    /// Theta parameters of the `j`-th basis function: characteristic `j/k`,
    /// level `k·r` in base-τ units, frequency `k`, translation `k(δτ + β)`.
    pub fn theta_params(&self, j: usize) -> ThetaParams {
        hom_theta_params(&self.source, &self.target, j)
    }

    /// Basis element `j` with unit fiber map at `(row, col)`.
    pub fn basis_element(
        source: &BundleDesc,
        target: &BundleDesc,
        j: usize,
        row: usize,
        col: usize,
    ) -> Result<Self> {
        let k = target.degree - source.degree;
        if k <= 0 {
            return Err(Error::DegreeMismatch("no sections for k <= 0".into()));
        }
        let mut coeffs = vec![CMat::zeros(target.fiber_dim(), source.fiber_dim()); k as usize];
        coeffs[j][(row, col)] = C64::new(1.0, 0.0);
        Self::new(source.clone(), target.clone(), coeffs)
    }

    /// `N_hom` applied `m` times to `c`.
    fn nil_power(&self, c: &CMat, m: usize) -> CMat {
        let mut out = c.clone();
        for _ in 0..m {
            out = self.target.nil.matrix() * &out - &out * self.source.nil.matrix();
        }
        out
    }

    /// Nilpotency order of `N_hom` (smallest `m` with `N_hom^m = 0` on these
    /// fiber dimensions).
    fn psi_order(&self) -> usize {
        self.source.fiber_dim() + self.target.fiber_dim() - 1
    }

    /// Evaluate at `z`. The theta series are summed to `tol`; the Ψ-twist is
    /// a finite exponential.
    pub fn eval(&self, tau: &TorusModulus, z: C64, tol: f64) -> Result<CMat> {
        let (d2, d1) = (self.target.fiber_dim(), self.source.fiber_dim());
        let mut acc = CMat::zeros(d2, d1);
        let k = self.k() as f64;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.iter().all(|e| e.norm() == 0.0) {
                continue;
            }
            let params = self.theta_params(j);
            let mut fact = 1.0;
            for m in 0..self.psi_order() {
                if m > 0 {
                    fact *= m as f64;
                }
                let nc = self.nil_power(c, m);
                if nc.iter().all(|e| e.norm() < 1e-300) {
                    break;
                }
                let dtheta = theta_deriv_eval(&params, tau, z, m as u32, tol)?;
                acc += nc.map(|e| e * dtheta / (fact * k.powi(m as i32)));
            }
        }
        Ok(acc)
    }

    /// Scalar automorphy factor of the hom bundle under `z ↦ z + rτ` (the
    /// inner curve's modulus): sections satisfy
    /// `s(z + rτ) = factor(z) · exp(N2) · s(z) · exp(-N1)`.
    pub fn automorphy_scalar(&self, tau: &TorusModulus, z: C64) -> C64 {
        let k = self.k() as f64;
        let inner_tau = self.source.level as f64 * tau.tau();
        let x21 = rat_f64(self.delta()) * inner_tau + self.beta();
        (-C64::new(0.0, PI) * k * (inner_tau + 2.0 * (z + x21))).exp()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &SectionElement) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).iter().map(|e| e.norm()).fold(0.0f64, f64::max))
            .fold(0.0f64, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{nilpotent_exp, theta_eval, NilpotentMatrix};

    fn tau() -> TorusModulus {
        TorusModulus::new(0.3, 1.2).unwrap()
    }

    #[test]
    fn rank_one_section_is_plain_theta() {
        let o = BundleDesc::structure_sheaf();
        let l = BundleDesc::line_bundle_power(1);
        let s = SectionElement::basis_element(&o, &l, 0, 0, 0).unwrap();
        let z = C64::new(0.21, 0.34);
        let v = s.eval(&tau(), z, 1e-13).unwrap()[(0, 0)];
        let t = theta_eval(&ThetaParams::classical(), &tau(), z, 1e-13).unwrap();
        assert!((v - t).norm() < 1e-12);
    }

    #[test]
    fn rank_two_twist_matches_finite_difference_d() {
        // target has a J2 flat twist: value = (1 + (N/k)·D) f(z) · coeff
        let o = BundleDesc::structure_sheaf();
        let a = BundleDesc::new(2, Rat::new(0, 1), 0.0, NilpotentMatrix::jordan(2), 1).unwrap();
        let s = SectionElement::new(
            o.clone(),
            a.clone(),
            vec![
                CMat::from_column_slice(2, 1, &[C64::new(1.0, 0.0), C64::new(0.5, -0.25)]),
                CMat::zeros(2, 1),
            ],
        )
        .unwrap();
        let z = C64::new(0.13, 0.41);
        let got = s.eval(&tau(), z, 1e-13).unwrap();

        // finite-difference oracle for D = -(1/2πi) d/dz applied to the
        // untwisted theta factor
        let params = s.theta_params(0);
        let h = 1e-5;
        let fp = theta_eval(&params, &tau(), z + h, 1e-15).unwrap();
        let fm = theta_eval(&params, &tau(), z - h, 1e-15).unwrap();
        let f0 = theta_eval(&params, &tau(), z, 1e-15).unwrap();
        let df = -(fp - fm) / (2.0 * h) / C64::new(0.0, std::f64::consts::TAU);
        let c = &s.coeffs[0];
        let expected = c.map(|e| e * f0) + (a.nil.matrix() * c).map(|e| e * df / 2.0);
        assert!((got - expected).norm() < 1e-6);
    }

    #[test]
    fn automorphy_functional_equations() {
        // under z+1 sections are invariant; under z+rτ they pick up the
        // bundle's automorphy factor and the exp(N) conjugation
        let src = BundleDesc::new(1, Rat::new(1, 3), 0.2, NilpotentMatrix::zero(1), 1).unwrap();
        let tgt = BundleDesc::new(3, Rat::new(1, 2), 0.7, NilpotentMatrix::jordan(2), 1).unwrap();
        let s = SectionElement::basis_element(&src, &tgt, 1, 0, 0).unwrap();
        let tau = tau();
        for z in [C64::new(0.1, 0.2), C64::new(-0.37, 0.55)] {
            let v = s.eval(&tau, z, 1e-13).unwrap();
            let v1 = s.eval(&tau, z + 1.0, 1e-13).unwrap();
            assert!((&v1 - &v).norm() < 1e-10, "z+1 invariance");
            // compare at unit scale: the raw factor reaches ~1e5 and would
            // drown the identity in float rounding
            let vt = s.eval(&tau, z + tau.tau(), 1e-13).unwrap();
            let factor = s.automorphy_scalar(&tau, z);
            let left = nilpotent_exp(&tgt.nil, C64::new(1.0, 0.0));
            let right = nilpotent_exp(&src.nil, C64::new(-1.0, 0.0));
            let expected = left * &v * right;
            assert!(
                (vt.map(|e| e / factor) - expected).norm() < 1e-11,
                "z+τ functional equation"
            );
        }
    }

    #[test]
    fn constructor_validation() {
        let o = BundleDesc::structure_sheaf();
        let l = BundleDesc::line_bundle_power(1);
        assert!(SectionElement::new(l.clone(), o.clone(), vec![]).is_err());
        assert!(SectionElement::new(o.clone(), l.clone(), vec![]).is_err());
        let lvl2 = BundleDesc::new(1, Rat::new(0, 1), 0.0, NilpotentMatrix::zero(1), 2).unwrap();
        assert!(matches!(
            SectionElement::new(o, lvl2, vec![CMat::identity(1, 1)]),
            Err(Error::LevelMismatch(1, 2))
        ));
    }
}
