//! The composition `m2`: an energy- and holonomy-weighted count of immersed
//! triangles, computed by lifting to the universal cover.
//!
//! For input points `p0 ∈ L0∩L1`, `p1 ∈ L1∩L2` fix a lift `A` of `p0`; the
//! lifts of `p1` on the `L1`-line through `A` form the integer family
//! `B(n) = B0 + n·(q1,p1)`, and each determines the third vertex
//! `C(n) = l0 ∩ l2(n)`. A lift bounds a holomorphic disk exactly when the
//! vertex cycle `A → B → C` closes with non-positive cross product in these
//! coordinates (the degenerate all-coincident lift counts with weight 1); it
//! contributes
//!
//! ```text
//! e^{2πi·τ·Area} · P_{γ2} ∘ c1 ∘ P_{γ1} ∘ c0 ∘ P_{γ0}
//! ```
//!
//! with `P_γ = M^ℓ` the monodromy transport over the signed traversal
//! fraction of each boundary arc. The series is truncated once the quadratic
//! growth of the area drives terms below tolerance, then the window is
//! doubled as a convergence self-check.

use crate::fukaya::{intersections, Brane, Line, PointSum};
use crate::numerics::TorusModulus;
use crate::{frac, rat_f64, CMat, Error, Rat, Result, C64};
use num_integer::Integer;
use std::f64::consts::TAU;

pub fn m2(u1: &PointSum, u2: &PointSum, tau: &TorusModulus, tol: f64) -> Result<PointSum> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    if u1.target != u2.source {
        return Err(Error::EndpointMismatch(
            "target of the first morphism differs from source of the second".into(),
        ));
    }
    let l0 = &u1.source;
    let l1 = &u1.target;
    let l2 = &u2.target;
    for (a, b) in [(l0, l1), (l1, l2), (l0, l2)] {
        if a.slope.p * b.slope.q == b.slope.p * a.slope.q {
            return Err(Error::NonTransversal(
                "m2 needs pairwise transversal geodesics; compose intertwiners algebraically"
                    .into(),
            ));
        }
    }

    let out_points = intersections(l0, l2)?;
    let mut acc: Vec<CMat> = out_points
        .iter()
        .map(|_| CMat::zeros(l2.rank(), l0.rank()))
        .collect();

    for (pt0, c0) in &u1.terms {
        for (pt1, c1) in &u2.terms {
            sum_triangles(
                l0,
                l1,
                l2,
                *pt0,
                c0,
                *pt1,
                c1,
                tau,
                tol,
                &out_points,
                &mut acc,
            )?;
        }
    }

    let terms = out_points.into_iter().zip(acc).collect();
    PointSum::new(l0.clone(), l2.clone(), terms)
}

#[allow(clippy::too_many_arguments)]
fn sum_triangles(
    l0: &Brane,
    l1: &Brane,
    l2: &Brane,
    pt0: (Rat, Rat),
    c0: &CMat,
    pt1: (Rat, Rat),
    c1: &CMat,
    tau: &TorusModulus,
    tol: f64,
    out_points: &[(Rat, Rat)],
    acc: &mut [CMat],
) -> Result<()> {
    let line0 = Line::through(l0, pt0);
    let line1 = Line::through(l1, pt0);

    // Base lift of pt1 on line1: solve p·u - q·v = g over the integers.
    let g = line1.c - (Rat::from_integer(line1.p) * pt1.0 - Rat::from_integer(line1.q) * pt1.1);
    debug_assert!(g.is_integer(), "pt1 must lie on the L1 geodesic");
    let g = g.to_integer();
    let egcd = line1.p.extended_gcd(&line1.q);
    debug_assert_eq!(egcd.gcd, 1, "slope is reduced");
    // p·x + q·y = 1  =>  p·(g·x) - q·(-g·y) = g
    let (u, v) = (g * egcd.x, -g * egcd.y);
    let b0 = (pt1.0 + Rat::from_integer(u), pt1.1 + Rat::from_integer(v));
    let w1 = (Rat::from_integer(l1.slope.q), Rat::from_integer(l1.slope.p));

    let a = (pt0.0, pt0.1);
    let stop_eps = tol * 1e-2;

    // One lifted triangle; returns (index, contribution, proxy area, kept).
    let term = |n: i64| -> (Option<usize>, CMat, f64) {
        let nn = Rat::from_integer(n);
        let b = (b0.0 + nn * w1.0, b0.1 + nn * w1.1);
        let line2 = Line::through(l2, b);
        let c = line0.intersect(&line2).expect("L0 and L2 transversal");
        let cross = (b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1);
        let area = rat_f64(cross).abs() / 2.0;
        if cross > Rat::new(0, 1) {
            return (None, CMat::zeros(l2.rank(), l0.rank()), area);
        }
        let weight = (C64::i() * TAU * tau.tau() * area).exp();
        let p0 = l0
            .monodromy
            .transport(l0.traversal_fraction((a.0 - c.0, a.1 - c.1)));
        let p1 = l1
            .monodromy
            .transport(l1.traversal_fraction((b.0 - a.0, b.1 - a.1)));
        let p2 = l2
            .monodromy
            .transport(l2.traversal_fraction((c.0 - b.0, c.1 - b.1)));
        let h = (p2 * c1 * p1 * c0 * p0).map(|e| e * weight);
        let reduced = (frac(c.0), frac(c.1));
        let idx = out_points
            .iter()
            .position(|p| *p == reduced)
            .expect("third vertex projects to an L0∩L2 point");
        (Some(idx), h, area)
    };

    // Walk outward from n = 0 until two consecutive negligible terms per
    // side. Areas shrink monotonically toward the enumeration's waist and
    // grow quadratically past it, so "small and not shrinking" is a sound
    // stopping signal.
    let mut extents = [0i64, 0];
    let (idx0, h0, _) = term(0);
    if let Some(i) = idx0 {
        acc[i] += &h0;
    }
    for (side, dir) in [1i64, -1].into_iter().enumerate() {
        let mut consecutive = 0;
        let mut prev_area = 0.0f64;
        let mut n = 0i64;
        loop {
            n += dir;
            if n.abs() > 4000 {
                return Err(Error::Malformed(
                    "m2 triangle window failed to converge".into(),
                ));
            }
            let (idx, h, area) = term(n);
            // only kept lifts may advance the stopping counter; a run of
            // orientation-filtered lifts says nothing about the tail
            if let Some(i) = idx {
                acc[i] += &h;
                if h.norm() < stop_eps && area >= prev_area {
                    consecutive += 1;
                    if consecutive >= 2 {
                        break;
                    }
                } else {
                    consecutive = 0;
                }
            } else {
                consecutive = 0;
            }
            prev_area = area;
        }
        extents[side] = n.abs();
    }

    // Convergence self-check: double the window and require negligible change.
    let mut added = 0.0f64;
    for n in (extents[0] + 1)..=(2 * extents[0]) {
        let (idx, h, _) = term(n);
        added += h.norm();
        if let Some(i) = idx {
            acc[i] += &h;
        }
    }
    for n in (-2 * extents[1])..=(-extents[1] - 1) {
        let (idx, h, _) = term(n);
        added += h.norm();
        if let Some(i) = idx {
            acc[i] += &h;
        }
    }
    if added > tol {
        return Err(Error::Malformed(format!(
            "m2 window self-check failed: doubling added {added:.3e} > tol {tol:.3e}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fukaya::{Monodromy, Slope};
    use crate::numerics::{theta_eval, ThetaParams};

    fn tau_ia(area: f64) -> TorusModulus {
        TorusModulus::new(0.0, area).unwrap()
    }

    fn rank1(n: i64, intercept: Rat, beta: f64) -> Brane {
        Brane::with_base_grading(
            Slope::integer(n),
            intercept,
            Monodromy::new(beta, crate::numerics::NilpotentMatrix::zero(1)),
        )
    }

    fn unit(src: &Brane, tgt: &Brane, idx: usize) -> PointSum {
        PointSum::basis(src, tgt).unwrap()[idx].clone()
    }

    fn theta_const(a: Rat, beta: f64, tau: &TorusModulus) -> C64 {
        // θ[a, β](2τ, 0)
        let p = ThetaParams::new(a, 2, 1)
            .unwrap()
            .with_translation(0.0, beta);
        theta_eval(&p, tau, C64::new(0.0, 0.0), 1e-14).unwrap()
    }

    #[test]
    fn simple_example_through_origin() {
        let tau = tau_ia(1.0);
        let l0 = rank1(0, Rat::new(0, 1), 0.0);
        let l1 = rank1(1, Rat::new(0, 1), 0.0);
        let l2 = rank1(2, Rat::new(0, 1), 0.0);
        let e1 = unit(&l0, &l1, 0);
        let e1p = unit(&l1, &l2, 0);
        let prod = m2(&e1, &e1p, &tau, 1e-12).unwrap();

        let c_e1 = prod.coefficient(&(Rat::new(0, 1), Rat::new(0, 1)))[(0, 0)];
        let c_e2 = prod.coefficient(&(Rat::new(1, 2), Rat::new(0, 1)))[(0, 0)];
        // coefficients are θ_{2τ}(0) = Σ e^{-2πAn²} and θ[1/2,0](2τ,0)
        let t1 = theta_const(Rat::new(0, 1), 0.0, &tau);
        let t2 = theta_const(Rat::new(1, 2), 0.0, &tau);
        assert!((c_e1 - t1).norm() < 1e-11, "{c_e1} vs {t1}");
        assert!((c_e2 - t2).norm() < 1e-11, "{c_e2} vs {t2}");
        // positive-term series with trivial holonomy and no B-field
        assert!(c_e1.re > 1.0 && c_e1.im.abs() < 1e-12);
    }

    #[test]
    fn shifted_example() {
        let tau = tau_ia(1.0);
        let x0 = Rat::new(1, 5);
        let l0 = rank1(0, Rat::new(0, 1), 0.0);
        let l1 = rank1(1, Rat::new(0, 1), 0.0);
        let l2 = rank1(2, x0, 0.0);
        let prod = m2(&unit(&l0, &l1, 0), &unit(&l1, &l2, 0), &tau, 1e-12).unwrap();

        let p1 = (x0, Rat::new(0, 1));
        let p2 = (frac(x0 + Rat::new(1, 2)), Rat::new(0, 1));
        let c1 = prod.coefficient(&p1)[(0, 0)];
        let c2 = prod.coefficient(&p2)[(0, 0)];
        let t1 = theta_const(x0, 0.0, &tau);
        let t2 = theta_const(x0 + Rat::new(1, 2), 0.0, &tau);
        assert!((c1 - t1).norm() < 1e-11);
        assert!((c2 - t2).norm() < 1e-11);
    }

    #[test]
    fn connection_example() {
        // shifted L2 carrying a nontrivial flat connection β
        let tau = tau_ia(1.0);
        let x0 = Rat::new(1, 5);
        let beta = 0.15;
        let l0 = rank1(0, Rat::new(0, 1), 0.0);
        let l1 = rank1(1, Rat::new(0, 1), 0.0);
        let l2 = rank1(2, x0, beta);
        let prod = m2(&unit(&l0, &l1, 0), &unit(&l1, &l2, 0), &tau, 1e-12).unwrap();

        let c1 = prod.coefficient(&(x0, Rat::new(0, 1)))[(0, 0)];
        let c2 = prod.coefficient(&(frac(x0 + Rat::new(1, 2)), Rat::new(0, 1)))[(0, 0)];
        let t1 = theta_const(x0, beta, &tau);
        let t2 = theta_const(x0 + Rat::new(1, 2), beta, &tau);
        assert!((c1 - t1).norm() < 1e-11, "{c1} vs {t1}");
        assert!((c2 - t2).norm() < 1e-11, "{c2} vs {t2}");
    }

    #[test]
    fn bilinearity() {
        let tau = TorusModulus::new(0.3, 1.2).unwrap();
        let l0 = rank1(0, Rat::new(0, 1), 0.0);
        let l1 = rank1(1, Rat::new(1, 3), 0.1);
        let l2 = rank1(3, Rat::new(1, 2), 0.0);
        let u1 = unit(&l0, &l1, 0);
        let u2 = unit(&l1, &l2, 0);
        let s = C64::new(-1.7, 0.4);
        let lhs = m2(&u1.scale(s), &u2, &tau, 1e-12).unwrap();
        let rhs = m2(&u1, &u2, &tau, 1e-12).unwrap().scale(s);
        assert!(lhs.max_abs_diff(&rhs) < 1e-11);
    }

    #[test]
    fn associativity_on_distinct_slopes() {
        let tau = TorusModulus::new(0.1, 0.9).unwrap();
        let l0 = rank1(0, Rat::new(0, 1), 0.0);
        let l1 = rank1(1, Rat::new(1, 2), 0.0);
        let l2 = rank1(2, Rat::new(1, 3), 0.2);
        let l3 = rank1(4, Rat::new(0, 1), 0.0);
        for i in 0..2 {
            let u1 = unit(&l0, &l1, 0);
            let u2 = unit(&l1, &l2, 0);
            let u3 = unit(&l2, &l3, i);
            let lhs = m2(&m2(&u1, &u2, &tau, 1e-12).unwrap(), &u3, &tau, 1e-12).unwrap();
            let rhs = m2(&u1, &m2(&u2, &u3, &tau, 1e-12).unwrap(), &tau, 1e-12).unwrap();
            assert!(
                lhs.max_abs_diff(&rhs) < 1e-9,
                "associativity residual {}",
                lhs.max_abs_diff(&rhs)
            );
        }
    }

    #[test]
    fn rejects_non_transversal_and_mismatched() {
        let tau = tau_ia(1.0);
        let l0 = rank1(0, Rat::new(0, 1), 0.0);
        let l1 = rank1(1, Rat::new(0, 1), 0.0);
        let l1b = rank1(1, Rat::new(1, 2), 0.0);
        let u1 = unit(&l0, &l1, 0);
        let u2 = unit(&l1b, &l0.shift(1), 0);
        assert!(matches!(
            m2(&u1, &u2, &tau, 1e-12),
            Err(Error::EndpointMismatch(_))
        ));
        let u3 = unit(&l1, &l0.shift(1), 0);
        assert!(matches!(
            m2(&u1, &u3, &tau, 1e-12),
            Err(Error::NonTransversal(_))
        ));
        assert!(matches!(
            m2(&u1, &u3, &tau, 0.0),
            Err(Error::InvalidTolerance(_))
        ));
    }
}
