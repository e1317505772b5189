//! Hom spaces between B-side objects.

use crate::numerics::sylvester_kernel;
use crate::sheaves::{BundleDesc, SectionElement, TorsionDesc};
use crate::{CMat, Error, Rat, Result, C64};

/// Basis of `Hom(A1, A2)` for descriptors at the same isogeny level, viewed
/// on their common inner curve.
#[derive(Debug, Clone)]
pub enum HomBasis {
    /// `k = n2 - n1 > 0`: translated theta sections tensored with elementary
    /// fiber maps, `k·dimV1·dimV2` of them.
    Sections {
        k: i64,
        delta: Rat,
        beta: f64,
        elements: Vec<SectionElement>,
    },
    /// `k = 0` with equal twists: intertwiners of the flat factors.
    Intertwiners(Vec<CMat>),
    /// `k < 0`, or `k = 0` with distinct twists: only the zero morphism.
    Empty,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        match self {
            HomBasis::Sections { elements, .. } => elements.len(),
            HomBasis::Intertwiners(b) => b.len(),
            HomBasis::Empty => 0,
        }
    }

    pub fn sections(&self) -> &[SectionElement] {
        match self {
            HomBasis::Sections { elements, .. } => elements,
            _ => &[],
        }
    }
}

/// `Hom(L1, L2) = H^0(t*_δ L^k)` with `δ = δ21·τ + β21`; only positive-degree
/// twists admit sections, and degree zero needs equal twists.
pub fn hom_basis(a1: &BundleDesc, a2: &BundleDesc) -> Result<HomBasis> {
    if a1.level != a2.level {
        return Err(Error::LevelMismatch(a1.level, a2.level));
    }
    let k = a2.degree - a1.degree;
    if k < 0 {
        return Ok(HomBasis::Empty);
    }
    if k == 0 {
        if !a1.same_twist(a2) {
            return Ok(HomBasis::Empty);
        }
        let m1 = crate::numerics::nilpotent_exp(&a1.nil, C64::new(1.0, 0.0));
        let m2 = crate::numerics::nilpotent_exp(&a2.nil, C64::new(1.0, 0.0));
        return Ok(HomBasis::Intertwiners(sylvester_kernel(&m1, &m2)));
    }
    let mut elements = Vec::with_capacity(k as usize * a1.fiber_dim() * a2.fiber_dim());
    for j in 0..k as usize {
        for col in 0..a1.fiber_dim() {
            for row in 0..a2.fiber_dim() {
                elements.push(SectionElement::basis_element(a1, a2, j, row, col)?);
            }
        }
    }
    let probe = &elements[0];
    Ok(HomBasis::Sections {
        k,
        delta: probe.delta(),
        beta: probe.beta(),
        elements,
    })
}

/// Dimension of `Hom(A1, A2)` (degree 0) or `Ext¹(A1, A2)` (degree 1).
///
/// Degree 1 comes from `χ = deg2·rk1 - deg1·rk2` rather than from Serre
/// duality, so dimension-level duality checks compare two genuinely
/// different computations.
pub fn bundle_hom_dim(a1: &BundleDesc, a2: &BundleDesc, degree: i64) -> Result<usize> {
    let h0 = hom_basis(a1, a2)?.dim();
    match degree {
        0 => Ok(h0),
        1 => {
            let chi = (a2.degree - a1.degree) * (a1.fiber_dim() * a2.fiber_dim()) as i64;
            Ok((h0 as i64 - chi) as usize)
        }
        _ => Ok(0),
    }
}

/// `Hom(S1, S2)`: zero unless the supports coincide, in which case it is the
/// intertwiner space of the nilpotent parts.
pub fn hom_torsion(s1: &TorsionDesc, s2: &TorsionDesc) -> Vec<CMat> {
    if !s1.same_support(s2) {
        return Vec::new();
    }
    sylvester_kernel(s1.nil.matrix(), s2.nil.matrix())
}

/// `Hom(A, S) = Hom(V, V')`: the full fiber-hom space, as elementary basis.
pub fn hom_bundle_torsion(a: &BundleDesc, s: &TorsionDesc) -> Vec<CMat> {
    let (d, dp) = (a.fiber_dim(), s.fiber_dim());
    let mut basis = Vec::with_capacity(d * dp);
    for col in 0..d {
        for row in 0..dp {
            let mut m = CMat::zeros(dp, d);
            m[(row, col)] = C64::new(1.0, 0.0);
            basis.push(m);
        }
    }
    basis
}

/// `Hom(S, A) = 0` in degree zero; torsion maps nowhere into a bundle.
pub fn hom_torsion_bundle(_s: &TorsionDesc, _a: &BundleDesc) -> Vec<CMat> {
    Vec::new()
}

/// `(h0, h1, deg, rank)` with `h0 - h1 = deg` (genus one, so χ = deg).
///
/// `h0` counts `Hom(O, A)` and `h1` counts `Hom(A, O)`, which is Serre-dual
/// to `Ext¹(O, A) = H¹(A)`.
pub fn riemann_roch_check(a: &BundleDesc) -> Result<(usize, usize, i64, usize)> {
    let o = BundleDesc {
        degree: 0,
        twist_a: Rat::new(0, 1),
        twist_b: 0.0,
        nil: crate::numerics::NilpotentMatrix::zero(1),
        level: a.level,
    };
    let h0 = hom_basis(&o, a)?.dim();
    let h1 = hom_basis(a, &o)?.dim();
    let deg = a.sheaf_degree();
    if h0 as i64 - h1 as i64 != deg {
        return Err(Error::Malformed(format!(
            "Riemann-Roch violated: h0 - h1 = {} but deg = {deg}",
            h0 as i64 - h1 as i64
        )));
    }
    Ok((h0, h1, deg, a.rank()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{theta_eval, NilpotentMatrix, ThetaParams, TorusModulus};

    #[test]
    fn structure_to_line_bundle_is_classical_theta() {
        let o = BundleDesc::structure_sheaf();
        let l = BundleDesc::line_bundle_power(1);
        let basis = hom_basis(&o, &l).unwrap();
        assert_eq!(basis.dim(), 1);
        let tau = TorusModulus::new(0.0, 1.0).unwrap();
        let z = C64::new(0.4, 0.13);
        let v = basis.sections()[0].eval(&tau, z, 1e-13).unwrap()[(0, 0)];
        let t = theta_eval(&ThetaParams::classical(), &tau, z, 1e-13).unwrap();
        assert!((v - t).norm() < 1e-12);
    }

    #[test]
    fn degree_two_basis_has_two_theta_functions() {
        let o = BundleDesc::structure_sheaf();
        let l2 = BundleDesc::line_bundle_power(2);
        let basis = hom_basis(&o, &l2).unwrap();
        assert_eq!(basis.dim(), 2);
        if let HomBasis::Sections {
            k,
            delta,
            beta,
            elements,
        } = &basis
        {
            assert_eq!(*k, 2);
            assert_eq!(*delta, Rat::new(0, 1));
            assert_eq!(*beta, 0.0);
            let p0 = elements[0].theta_params(0);
            assert_eq!(p0.level, 2);
            assert_eq!(p0.frequency, 2);
            assert_eq!(elements[1].theta_params(1).characteristic, Rat::new(1, 2));
        } else {
            panic!("expected sections");
        }
    }

    #[test]
    fn negative_degree_has_no_sections() {
        let l = BundleDesc::line_bundle_power(1);
        let l2 = BundleDesc::line_bundle_power(2);
        assert_eq!(hom_basis(&l2, &l).unwrap().dim(), 0);
    }

    #[test]
    fn basis_size_law() {
        // (n2-n1)·d1·d2 across ranks and twists
        let a1 = BundleDesc::new(1, Rat::new(1, 3), 0.4, NilpotentMatrix::jordan(2), 1).unwrap();
        let a2 = BundleDesc::new(4, Rat::new(1, 2), 0.1, NilpotentMatrix::jordan(3), 1).unwrap();
        assert_eq!(hom_basis(&a1, &a2).unwrap().dim(), 3 * 2 * 3);
    }

    #[test]
    fn equal_degree_homs_are_intertwiners() {
        let a = BundleDesc::new(2, Rat::new(1, 5), 0.3, NilpotentMatrix::jordan(2), 1).unwrap();
        let b = hom_basis(&a, &a).unwrap();
        assert_eq!(b.dim(), 2);
        let other = BundleDesc::new(2, Rat::new(2, 5), 0.3, NilpotentMatrix::jordan(2), 1).unwrap();
        assert_eq!(hom_basis(&a, &other).unwrap().dim(), 0);
    }

    #[test]
    fn torsion_homs() {
        let j2 = || NilpotentMatrix::jordan(2);
        let s1 = TorsionDesc::new(Rat::new(1, 3), 0.2, NilpotentMatrix::zero(1));
        assert_eq!(hom_torsion(&s1, &s1).len(), 1);
        let s2 = TorsionDesc::new(Rat::new(1, 3), 0.9, NilpotentMatrix::zero(1));
        assert!(hom_torsion(&s1, &s2).is_empty());
        let t1 = TorsionDesc::new(Rat::new(0, 1), 0.0, j2());
        let t2 = TorsionDesc::new(Rat::new(0, 1), 0.0, j2());
        assert_eq!(hom_torsion(&t1, &t2).len(), 2);
    }

    #[test]
    fn bundle_torsion_homs() {
        let a = BundleDesc::line_bundle_power(1);
        let s = TorsionDesc::new(Rat::new(0, 1), 0.0, NilpotentMatrix::zero(1));
        assert_eq!(hom_bundle_torsion(&a, &s).len(), 1);
        assert!(hom_torsion_bundle(&s, &a).is_empty());
        let a2 = BundleDesc::new(1, Rat::new(0, 1), 0.0, NilpotentMatrix::jordan(2), 1).unwrap();
        let s3 = TorsionDesc::new(Rat::new(0, 1), 0.0, NilpotentMatrix::jordan(3));
        assert_eq!(hom_bundle_torsion(&a2, &s3).len(), 6);
    }

    #[test]
    fn riemann_roch_values() {
        let l = BundleDesc::line_bundle_power(1);
        assert_eq!(riemann_roch_check(&l).unwrap(), (1, 0, 1, 1));
        let o = BundleDesc::structure_sheaf();
        assert_eq!(riemann_roch_check(&o).unwrap(), (1, 1, 0, 1));
        let l3 = BundleDesc::line_bundle_power(3);
        assert_eq!(riemann_roch_check(&l3).unwrap(), (3, 0, 3, 1));
        let neg = BundleDesc::line_bundle_power(-2);
        assert_eq!(riemann_roch_check(&neg).unwrap(), (0, 2, -2, 1));
    }

    #[test]
    fn serre_duality_at_dimension_level() {
        let cases = [
            (
                BundleDesc::twisted(0, Rat::new(0, 1), 0.0),
                BundleDesc::twisted(2, Rat::new(1, 3), 0.5),
            ),
            (
                BundleDesc::new(1, Rat::new(1, 6), 0.0, NilpotentMatrix::jordan(2), 1).unwrap(),
                BundleDesc::new(3, Rat::new(0, 1), 0.25, NilpotentMatrix::zero(1), 1).unwrap(),
            ),
        ];
        for (a, b) in cases {
            assert_eq!(
                bundle_hom_dim(&a, &b, 1).unwrap(),
                bundle_hom_dim(&b, &a, 0).unwrap()
            );
            assert_eq!(
                bundle_hom_dim(&b, &a, 1).unwrap(),
                bundle_hom_dim(&a, &b, 0).unwrap()
            );
        }
    }
}
