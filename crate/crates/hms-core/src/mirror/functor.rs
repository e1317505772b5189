//! The mirror functor: Atiyah-form bundles and torsion sheaves to branes,
//! theta basis morphisms to weighted intersection points.

use crate::fukaya::{Brane, BraneTuple, Monodromy, PointSum, Slope};
use crate::numerics::{nilpotent_exp, ThetaParams, TorusModulus};
use crate::sheaves::{BundleDesc, SectionElement, TorsionDesc};
use crate::{frac, rat_f64, CMat, Error, Rat, Result, C64};
use std::f64::consts::PI;

/// A B-side object the functor accepts.
#[derive(Debug, Clone, PartialEq)]
pub enum SheafObject {
    Bundle(BundleDesc),
    Torsion(TorsionDesc),
}

/// A mirror pair; the A-side is always constructed through the functor.
#[derive(Debug, Clone)]
pub struct MirrorPair {
    pub bside: SheafObject,
    pub aside: BraneTuple,
    pub tau: TorusModulus,
}

impl MirrorPair {
    pub fn new(bside: SheafObject, tau: TorusModulus) -> Result<Self> {
        let aside = phi_object(&bside)?;
        Ok(Self { bside, aside, tau })
    }
}

/// Object map of the functor.
pub fn phi_object(obj: &SheafObject) -> Result<BraneTuple> {
    match obj {
        SheafObject::Bundle(b) => phi_bundle(b),
        SheafObject::Torsion(t) => Ok(phi_torsion(t).into()),
    }
}

/// The inner bundle maps under the level-`rτ` functor to the slope-`n` brane
/// with x-intercept `a/n` (y-intercept `-a` when horizontal) and monodromy
/// `e^{-2πib}·exp(N)`; pushing forward along the x-stretch rescales the slope
/// to `n/r` and the x-intercept to `r·a/n`. When `gcd(n, r) = d > 1` the
/// pushforward decomposes into `d` summands whose phases are the `d`-th
/// roots `(b + j)/d`, each with nilpotent part `N/d`.
pub fn phi_bundle(b: &BundleDesc) -> Result<BraneTuple> {
    let n = b.degree;
    let r = b.level as i64;
    let slope = Slope::new(n, r)?;
    let intercept = if n == 0 {
        frac(-b.twist_a)
    } else {
        frac(Rat::from_integer(r) * b.twist_a / Rat::from_integer(n))
    };
    let d = num_integer::gcd(n.abs(), r);
    let branes = (0..d)
        .map(|j| {
            let phase = crate::fracf((b.twist_b + j as f64) / d as f64);
            let nil = b.nil.scale(1.0 / d as f64);
            Brane::with_base_grading(slope, intercept, Monodromy::new(phase, nil))
        })
        .collect();
    Ok(BraneTuple(branes))
}

/// `S(-aτ-b, V, N)` maps to the vertical brane with x-intercept `a`, grading
/// `1/2`, monodromy `e^{-2πib}·exp(N)`.
pub fn phi_torsion(t: &TorsionDesc) -> Brane {
    Brane::with_base_grading(
        Slope::vertical(),
        t.point_a,
        Monodromy::new(t.point_b, t.nil.clone()),
    )
}

fn phi_single(b: &BundleDesc) -> Result<Brane> {
    let tuple = phi_bundle(b)?;
    if tuple.0.len() != 1 {
        return Err(Error::Malformed(
            "object decomposes; reduce through the isogeny functors first".into(),
        ));
    }
    Ok(tuple.0.into_iter().next().unwrap())
}

/// Scalar and matrix factor attached to the `j`-th hom basis element of
/// `Hom(A1, A2)`, with `δ = δ21` and `β = β21`:
///
/// ```text
/// Φ(Ψ(θ_j ⊗ f)) = e^{πiτδ²(n1-n2)} · exp[δ(N2 - N1* - 2πi(n2-n1)β)](f) · e_j
/// ```
fn phi_coefficient(
    a1: &BundleDesc,
    a2: &BundleDesc,
    delta: Rat,
    beta: f64,
    f: &CMat,
    tau: &TorusModulus,
) -> CMat {
    let k = a2.degree - a1.degree;
    let df = rat_f64(delta);
    let scalar = (C64::new(0.0, PI) * tau.tau() * df * df * -(k as f64)).exp()
        * (-C64::i() * std::f64::consts::TAU * df * k as f64 * beta).exp();
    let left = nilpotent_exp(&a2.nil, C64::from(df));
    let right = nilpotent_exp(&a1.nil, C64::from(-df));
    (left * f * right).map(|e| e * scalar)
}

/// Intersection point receiving basis index `j`: x ≡ δ21 + j/k, lying on
/// both mirror geodesics.
fn phi_target_point(a1: &BundleDesc, a2: &BundleDesc, delta: Rat, j: usize) -> (Rat, Rat) {
    let k = a2.degree - a1.degree;
    let x = delta + Rat::new(j as i64, k);
    let y = Rat::from_integer(a1.degree) * x - a1.twist_a;
    (frac(x), frac(y))
}

/// Morphism map on one canonical basis term `θ ⊗ f`, where `θ` must carry
/// the hom translation and characteristic `j/k` of `Hom(A1, A2)`.
pub fn phi_morphism(
    a1: &BundleDesc,
    a2: &BundleDesc,
    theta: &ThetaParams,
    f: &CMat,
    tau: &TorusModulus,
) -> Result<PointSum> {
    if a1.level != 1 || a2.level != 1 {
        return Err(Error::Malformed(
            "morphism functor is defined on level-1 data; reduce through isogenies".into(),
        ));
    }
    let k = a2.degree - a1.degree;
    if k <= 0 {
        return Err(Error::DegreeMismatch(
            "canonical basis terms need k = n2 - n1 > 0".into(),
        ));
    }
    let probe = SectionElement::basis_element(a1, a2, 0, 0, 0)?;
    let (delta, beta) = (probe.delta(), probe.beta());
    let j = (theta.characteristic * Rat::from_integer(k)).to_integer();
    let expected = probe.theta_params(j as usize);
    let matches = theta.level == expected.level
        && theta.frequency == expected.frequency
        && theta.characteristic == expected.characteristic
        && (theta.delta - expected.delta).abs() < 1e-12
        && (theta.beta - expected.beta).abs() < 1e-12;
    if !matches || !(theta.characteristic * Rat::from_integer(k)).is_integer() {
        return Err(Error::NotCanonicalBasis(format!(
            "expected t*_(δτ+β) f_j^({k}) with δ = {delta}, β = {beta}"
        )));
    }
    let coeff = phi_coefficient(a1, a2, delta, beta, f, tau);
    let point = phi_target_point(a1, a2, delta, j as usize);
    PointSum::new(phi_single(a1)?, phi_single(a2)?, vec![(point, coeff)])
}

/// Morphism map on a whole section element (term-by-term on the canonical
/// basis it is stored in).
pub fn phi_section(s: &SectionElement, tau: &TorusModulus) -> Result<PointSum> {
    if s.source.level != 1 {
        return Err(Error::Malformed(
            "morphism functor is defined on level-1 data; reduce through isogenies".into(),
        ));
    }
    let (delta, beta) = (s.delta(), s.beta());
    let source = phi_single(&s.source)?;
    let target = phi_single(&s.target)?;
    let terms = s
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.iter().any(|e| e.norm() != 0.0))
        .map(|(j, c)| {
            (
                phi_target_point(&s.source, &s.target, delta, j),
                phi_coefficient(&s.source, &s.target, delta, beta, c, tau),
            )
        })
        .collect();
    PointSum::new(source, target, terms)
}

/// Bundle-to-torsion morphism map: `f ∈ Hom(V, V')` lands on the unique
/// intersection of the slanted and vertical branes with the stated scalar
/// and nilpotent factor.
pub fn phi_bundle_torsion_morphism(
    f: &CMat,
    a: &BundleDesc,
    s: &TorsionDesc,
    tau: &TorusModulus,
) -> Result<PointSum> {
    if a.level != 1 {
        return Err(Error::Malformed(
            "morphism functor is defined on level-1 data; reduce through isogenies".into(),
        ));
    }
    let n = a.degree as f64;
    let alpha = rat_f64(a.twist_a);
    let beta = a.twist_b;
    let ap = rat_f64(s.point_a);
    let bp = s.point_b;
    let scalar = (-C64::new(0.0, PI) * tau.tau() * (n * ap * ap - 2.0 * ap * alpha)).exp()
        * (C64::i() * std::f64::consts::TAU * (ap * beta + bp * alpha - n * ap * bp)).exp();
    let left = nilpotent_exp(&s.nil, C64::from(n * ap - alpha));
    let right = nilpotent_exp(&a.nil, C64::from(alpha));
    let coeff = (left * f * right).map(|e| e * scalar);

    let point = (
        s.point_a,
        frac(Rat::from_integer(a.degree) * s.point_a - a.twist_a),
    );
    PointSum::new(phi_single(a)?, phi_torsion(s), vec![(point, coeff)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::NilpotentMatrix;

    #[test]
    fn structure_sheaf_maps_to_horizontal_brane() {
        let o = BundleDesc::structure_sheaf();
        let b = phi_single(&o).unwrap();
        assert_eq!(b.slope, Slope::integer(0));
        assert_eq!(b.intercept, Rat::new(0, 1));
        assert_eq!(b.alpha, 0.0);
        assert!(b.monodromy.nil.is_zero() && b.monodromy.phase_b == 0.0);
    }

    #[test]
    fn degree_one_bundle_maps_to_slope_one() {
        let l = BundleDesc::line_bundle_power(1);
        let b = phi_single(&l).unwrap();
        assert_eq!(b.slope, Slope::integer(1));
        assert_eq!(b.intercept, Rat::new(0, 1));
    }

    #[test]
    fn torsion_maps_to_vertical() {
        let s = TorsionDesc::new(Rat::new(0, 1), 0.0, NilpotentMatrix::zero(1));
        let b = phi_torsion(&s);
        assert_eq!(b.slope, Slope::vertical());
        assert_eq!(b.intercept, Rat::new(0, 1));
        assert_eq!(b.alpha, 0.5);
    }

    #[test]
    fn intercepts_track_twists() {
        // slope d brane with x-intercept x0 mirrors t*_{d·x0·τ}L ⊗ L^{d-1}
        let a = BundleDesc::twisted(2, Rat::new(2, 5), 0.0);
        let b = phi_single(&a).unwrap();
        assert_eq!(b.intercept, Rat::new(1, 5));
        // horizontal case: y-intercept is -a
        let f = BundleDesc::twisted(0, Rat::new(1, 3), 0.25);
        let hb = phi_single(&f).unwrap();
        assert_eq!(hb.intercept, Rat::new(2, 3));
        assert!((hb.monodromy.phase_b - 0.25).abs() < 1e-15);
    }

    #[test]
    fn section_basis_maps_to_unit_points() {
        // Hom(O, L²) basis lands on e_0, e_1 with coefficient 1
        let tau = TorusModulus::new(0.0, 1.0).unwrap();
        let o = BundleDesc::structure_sheaf();
        let l2 = BundleDesc::line_bundle_power(2);
        for j in 0..2usize {
            let s = SectionElement::basis_element(&o, &l2, j, 0, 0).unwrap();
            let u = phi_section(&s, &tau).unwrap();
            assert_eq!(u.terms.len(), 1);
            let (p, c) = &u.terms[0];
            assert_eq!(p.0, Rat::new(j as i64, 2));
            assert_eq!(p.1, Rat::new(0, 1));
            assert!((c[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn phi_morphism_checks_canonical_terms() {
        let tau = TorusModulus::new(0.0, 1.0).unwrap();
        let o = BundleDesc::structure_sheaf();
        let l2 = BundleDesc::line_bundle_power(2);
        let s = SectionElement::basis_element(&o, &l2, 1, 0, 0).unwrap();
        let good = phi_morphism(&o, &l2, &s.theta_params(1), &CMat::identity(1, 1), &tau);
        assert!(good.is_ok());
        let bad = ThetaParams::new(Rat::new(1, 2), 2, 2)
            .unwrap()
            .with_translation(0.3, 0.0);
        assert!(matches!(
            phi_morphism(&o, &l2, &bad, &CMat::identity(1, 1), &tau),
            Err(Error::NotCanonicalBasis(_))
        ));
    }

    #[test]
    fn shifted_basis_carries_the_stated_scalar() {
        // δ31 = x0, k = 2: coefficient e^{-2πi τ x0²}
        let tau = TorusModulus::new(0.0, 1.0).unwrap();
        let o = BundleDesc::structure_sheaf();
        let a3 = BundleDesc::twisted(2, Rat::new(2, 5), 0.0);
        let s = SectionElement::basis_element(&o, &a3, 0, 0, 0).unwrap();
        let u = phi_section(&s, &tau).unwrap();
        let x0 = 0.2;
        let expected = (-C64::i() * std::f64::consts::TAU * tau.tau() * x0 * x0).exp();
        assert!((u.terms[0].1[(0, 0)] - expected).norm() < 1e-14);
    }

    #[test]
    fn bundle_torsion_scalar_example() {
        // rank 1, N' = 0, a = 1/3, n = 1, α = β = b = 0 → e^{-πiτ/9}
        let tau = TorusModulus::new(0.3, 1.2).unwrap();
        let a = BundleDesc::line_bundle_power(1);
        let s = TorsionDesc::new(Rat::new(1, 3), 0.0, NilpotentMatrix::zero(1));
        let u = phi_bundle_torsion_morphism(&CMat::identity(1, 1), &a, &s, &tau).unwrap();
        let expected = (-C64::new(0.0, PI) * tau.tau() / 9.0).exp();
        assert!((u.terms[0].1[(0, 0)] - expected).norm() < 1e-14);
        assert_eq!(u.terms[0].0, (Rat::new(1, 3), Rat::new(1, 3)));

        // trivial data → coefficient 1
        let s0 = TorsionDesc::new(Rat::new(0, 1), 0.0, NilpotentMatrix::zero(1));
        let u0 = phi_bundle_torsion_morphism(&CMat::identity(1, 1), &a, &s0, &tau).unwrap();
        assert!((u0.terms[0].1[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);

        // rank-2 torsion J2: matrix factor exp[(na-α)·N']
        let j2 = TorsionDesc::new(Rat::new(1, 3), 0.0, NilpotentMatrix::jordan(2));
        let f = CMat::from_column_slice(2, 1, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let u2 = phi_bundle_torsion_morphism(&f, &a, &j2, &tau).unwrap();
        let nilfac = nilpotent_exp(&NilpotentMatrix::jordan(2), C64::from(1.0 / 3.0));
        let expected2 = (nilfac * &f).map(|e| e * expected);
        assert!((&u2.terms[0].1 - expected2).norm() < 1e-14);
    }

    #[test]
    fn mirror_pair_constructs_the_image() {
        let tau = TorusModulus::new(0.0, 1.0).unwrap();
        let b = SheafObject::Bundle(BundleDesc::line_bundle_power(2));
        let pair = MirrorPair::new(b.clone(), tau).unwrap();
        assert_eq!(pair.aside, phi_object(&b).unwrap());
    }

    #[test]
    fn decomposing_pushforward_returns_tuple() {
        let b = BundleDesc::new(2, Rat::new(0, 1), 0.5, NilpotentMatrix::zero(1), 2).unwrap();
        let t = phi_bundle(&b).unwrap();
        assert_eq!(t.0.len(), 2);
        assert_eq!(t.0[0].slope, Slope::integer(1));
        assert!((t.0[0].monodromy.phase_b - 0.25).abs() < 1e-15);
        assert!((t.0[1].monodromy.phase_b - 0.75).abs() < 1e-15);
        assert!(phi_single(&b).is_err());
    }
}
