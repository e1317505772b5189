//! Composition of section morphisms: fiberwise multiplication, expanded back
//! into the canonical hom basis.
//!
//! The general route samples the pointwise product on a low-discrepancy grid
//! and solves the (over-determined) linear system for the basis coefficients;
//! it covers nilpotent twists uniformly. The scalar route expands the product
//! of two theta functions in closed form through the addition formula
//!
//! ```text
//! θ[a/n1,0](n1τ,z1)·θ[b/n2,0](n2τ,z2)
//!   = Σ_{j mod k} θ[c_j/k,0](kτ, z1+z2) · θ[(n2·c_j-k·b)/(n1n2k), 0](n1n2kτ, n2z1-n1z2)
//! ```
//!
//! with `k = n1+n2`, `c_j = j·n1+a+b`; the second factor sits at a constant
//! argument determined by the translations, so it contributes a theta
//! constant per basis index. The two routes cross-check each other.

use crate::numerics::{theta_deriv_eval, theta_eval, ThetaParams, TorusModulus};
use crate::sheaves::section::hom_theta_params;
use crate::sheaves::{BundleDesc, SectionElement};
use crate::{rat_f64, CMat, Error, Rat, Result, C64};

/// Condition-number ceiling for the sampling solve.
const COND_LIMIT: f64 = 1e8;

fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Sample points for the expansion solve, avoiding a small neighborhood of
/// the theta zeros at the (1/2, 1/2) translates.
///
/// The x-coordinate runs over the full period (it separates the
/// characteristics); the τ-direction stays in a central band, where the
/// basis functions keep comparable magnitudes even at large area. The
/// expansion coefficients are global data, so any nondegenerate node set
/// determines them.
fn sample_points(tau: &TorusModulus, level: u32, count: usize, offset: u64) -> Vec<C64> {
    let inner_tau = level as f64 * tau.tau();
    let mut out = Vec::with_capacity(count);
    let mut i = offset + 1;
    while out.len() < count {
        let x = halton(i, 2);
        let y = 0.2 + 0.6 * halton(i, 3);
        i += 1;
        let d2 = |u: f64| {
            let d = (u - 0.5).abs();
            d.min(1.0 - d)
        };
        if d2(x).hypot(d2(y)) < 1e-3 {
            continue;
        }
        out.push(C64::from(x) + C64::from(y) * inner_tau);
    }
    out
}

/// Left/right multiplication operators of `N_hom(C) = N_t·C - C·N_s` on
/// vectorized `d_t × d_s` matrices, entry index `(p,q) ↦ p·d_s + q`.
fn nil_hom_operator(source: &BundleDesc, target: &BundleDesc) -> CMat {
    let ds = source.fiber_dim();
    let dt = target.fiber_dim();
    let n = ds * dt;
    let idx = |p: usize, q: usize| p * ds + q;
    let mut op = CMat::zeros(n, n);
    let ns = source.nil.matrix();
    let nt = target.nil.matrix();
    for p in 0..dt {
        for q in 0..ds {
            let row = idx(p, q);
            for pp in 0..dt {
                op[(row, idx(pp, q))] += nt[(p, pp)];
            }
            for qq in 0..ds {
                op[(row, idx(p, qq))] -= ns[(qq, q)];
            }
        }
    }
    op
}

/// Numeric composition `s2 ∘ s1 : A1 → A3` by sampling and least squares.
pub fn compose(
    s1: &SectionElement,
    s2: &SectionElement,
    tau: &TorusModulus,
    tol: f64,
) -> Result<SectionElement> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    if s1.target != s2.source {
        return Err(Error::EndpointMismatch(
            "middle objects of the composition differ".into(),
        ));
    }
    let a1 = &s1.source;
    let a3 = &s2.target;
    let k3 = a3.degree - a1.degree;
    debug_assert!(k3 > 0, "k1, k2 > 0 forces k3 > 0");
    let (d1, d3) = (a1.fiber_dim(), a3.fiber_dim());
    let block = d1 * d3;
    let unknowns = k3 as usize * block;
    let n_samples = 2 * unknowns + 4;

    let samples = sample_points(tau, a1.level, n_samples, 0);
    let theta_tol = (tol * 1e-2).min(1e-12);

    // Ψ-twist operators (L - R)^m on vectorized coefficients.
    let nhom = nil_hom_operator(a1, a3);
    let psi_order = d1 + d3 - 1;
    let mut twist_ops = Vec::with_capacity(psi_order);
    let mut pow = CMat::identity(block, block);
    let mut fact = 1.0f64;
    for m in 0..psi_order {
        if m > 0 {
            pow = &nhom * &pow;
            fact *= m as f64;
        }
        twist_ops.push(pow.map(|e| e / (fact * (k3 as f64).powi(m as i32))));
    }

    let design_row_block = |z: C64| -> Result<Vec<CMat>> {
        (0..k3 as usize)
            .map(|j| {
                let params = hom_theta_params(a1, a3, j);
                let mut op = CMat::zeros(block, block);
                for (m, t_op) in twist_ops.iter().enumerate() {
                    let d = theta_deriv_eval(&params, tau, z, m as u32, theta_tol)?;
                    op += t_op.map(|e| e * d);
                }
                Ok(op)
            })
            .collect()
    };

    let mut design = CMat::zeros(n_samples * block, unknowns);
    let mut rhs = nalgebra::DVector::<C64>::zeros(n_samples * block);
    for (s, &z) in samples.iter().enumerate() {
        let h = s2.eval(tau, z, theta_tol)? * s1.eval(tau, z, theta_tol)?;
        let ops = design_row_block(z)?;
        // Row equilibration: section values span many orders of magnitude
        // across the fundamental domain at large area, which would let the
        // biggest samples dominate the fit. Weighting each sample to unit
        // scale keeps the system well conditioned without changing the
        // exact-arithmetic minimizer.
        let row_scale = ops
            .iter()
            .flat_map(|op| op.iter())
            .map(|e| e.norm())
            .fold(h.iter().map(|e| e.norm()).fold(0.0f64, f64::max), f64::max)
            .max(1e-300)
            .recip();
        for p in 0..d3 {
            for q in 0..d1 {
                rhs[s * block + p * d1 + q] = h[(p, q)] * row_scale;
            }
        }
        for (j, op) in ops.into_iter().enumerate() {
            design
                .view_mut((s * block, j * block), (block, block))
                .copy_from(&op.map(|e| e * row_scale));
        }
    }

    let svd = design.svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let smin = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if smin.is_nan() || smin <= 0.0 || smax / smin > COND_LIMIT {
        return Err(Error::IllConditioned { cond: smax / smin });
    }
    let sol = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::Malformed(e.into()))?;

    let coeffs: Vec<CMat> = (0..k3 as usize)
        .map(|j| {
            let mut c = CMat::zeros(d3, d1);
            for p in 0..d3 {
                for q in 0..d1 {
                    c[(p, q)] = sol[j * block + p * d1 + q];
                }
            }
            c
        })
        .collect();
    let result = SectionElement::new(a1.clone(), a3.clone(), coeffs)?;

    // Residual check at held-out points, each against its own scale.
    let holdout = sample_points(tau, a1.level, 8, n_samples as u64 + 17);
    let mut worst = 0.0f64;
    for &z in &holdout {
        let h = s2.eval(tau, z, theta_tol)? * s1.eval(tau, z, theta_tol)?;
        let r = result.eval(tau, z, theta_tol)? - &h;
        let scale = h.iter().map(|e| e.norm()).fold(1.0f64, f64::max);
        let resid = r.iter().map(|e| e.norm()).fold(0.0f64, f64::max);
        worst = worst.max(resid / scale);
    }
    if worst > tol {
        return Err(Error::Malformed(format!(
            "composition residual {worst:.3e} exceeds tolerance at held-out samples"
        )));
    }
    Ok(result)
}

/// Closed-form scalar composition via the addition formula. Requires rank-1
/// fibers; matrix coefficients fall back to [`compose`].
pub fn compose_closed_scalar(
    s1: &SectionElement,
    s2: &SectionElement,
    tau: &TorusModulus,
    tol: f64,
) -> Result<SectionElement> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    if s1.target != s2.source {
        return Err(Error::EndpointMismatch(
            "middle objects of the composition differ".into(),
        ));
    }
    if s1.source.fiber_dim() != 1 || s1.target.fiber_dim() != 1 || s2.target.fiber_dim() != 1 {
        return Err(Error::DimensionMismatch(
            "closed-form route needs scalar coefficients".into(),
        ));
    }
    let a1 = &s1.source;
    let a3 = &s2.target;
    let r = a1.level;
    let (k1, k2) = (s1.k(), s2.k());
    let k = k1 + k2;
    let inner_tau = r as f64 * tau.tau();
    let w1 = rat_f64(s1.delta()) * inner_tau + s1.beta();
    let w2 = rat_f64(s2.delta()) * inner_tau + s2.beta();

    let mut coeffs = vec![CMat::zeros(1, 1); k as usize];
    for (j1, c1) in s1.coeffs.iter().enumerate() {
        for (j2, c2) in s2.coeffs.iter().enumerate() {
            let scalar = c1[(0, 0)] * c2[(0, 0)];
            if scalar.norm() == 0.0 {
                continue;
            }
            for j in 0..k {
                let cj = j * k1 + j1 as i64 + j2 as i64;
                let i = cj.rem_euclid(k) as usize;
                let char2 = Rat::new(k2 * cj - k * j2 as i64, k1 * k2 * k);
                let params = ThetaParams::new(char2, (k1 * k2 * k * r as i64) as u32, 1)?;
                let arg = (k1 * k2) as f64 * (w1 - w2);
                let value = theta_eval(&params, tau, arg, tol)?;
                coeffs[i][(0, 0)] += scalar * value;
            }
        }
    }
    SectionElement::new(a1.clone(), a3.clone(), coeffs)
}

/// Post-compose a section with a `k = 0` intertwiner `t : A2 → A2'`
/// (equal twists); it acts on each coefficient from the left.
pub fn compose_section_then_intertwiner(
    s: &SectionElement,
    t: &CMat,
    new_target: &BundleDesc,
) -> Result<SectionElement> {
    if s.target.degree != new_target.degree || !s.target.same_twist(new_target) {
        return Err(Error::EndpointMismatch(
            "intertwiner endpoints must share degree and twist".into(),
        ));
    }
    let coeffs = s.coeffs.iter().map(|c| t * c).collect();
    SectionElement::new(s.source.clone(), new_target.clone(), coeffs)
}

/// Pre-compose with a `k = 0` intertwiner `t : A1' → A1`.
pub fn compose_intertwiner_then_section(
    t: &CMat,
    s: &SectionElement,
    new_source: &BundleDesc,
) -> Result<SectionElement> {
    if s.source.degree != new_source.degree || !s.source.same_twist(new_source) {
        return Err(Error::EndpointMismatch(
            "intertwiner endpoints must share degree and twist".into(),
        ));
    }
    let coeffs = s.coeffs.iter().map(|c| c * t).collect();
    SectionElement::new(new_source.clone(), s.target.clone(), coeffs)
}
