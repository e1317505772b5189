//! Jacobi theta series with characteristics.
//!
//! The basic object is
//!
//! ```text
//! θ[a, z0](level·τ, freq·z) = Σ_{m∈Z} exp(πi[(m+a)²·level·τ + 2(m+a)(freq·z + z0)])
//! ```
//!
//! with `z0 = δτ + β`. Term magnitudes are `exp(-π g(m))` for the upward
//! parabola `g(m) = level·A·(m+a)² + 2(m+a)·Y`, `Y = freq·Im z + δ·A`, so the
//! sum is truncated by walking outward from the integer nearest the vertex of
//! `g` and bounding each one-sided tail by a geometric series: once past the
//! vertex the increments `d(m) = π[g(m±1) - g(m)]` are positive and growing,
//! hence `Σ_{tail} |term| ≤ |term_M| / (1 - e^{-d(M)})`. Both one-sided bounds
//! are driven below `tol/2`.
//!
//! The operator `D = -u d/du = -(1/2πi) d/dz` acts term-wise as multiplication
//! by `-(m+a)·freq`; the same walk handles derivatives with the polynomial
//! factor folded into the ratio bound.

use crate::numerics::TorusModulus;
use crate::{rat_f64, Error, Rat, Result, C64};
use std::f64::consts::{PI, TAU as TWO_PI};

/// Practical cap on `D`-derivative order; nilpotency orders stay far below it.
pub const DERIV_ORDER_CAP: u32 = 16;

/// Parameters of one theta basis function.
///
/// `characteristic` is kept as an exact rational and reduced to `[0,1)` (an
/// integer shift of `a` only reindexes the sum). The translation is stored as
/// the pair `(delta, beta)` meaning `z0 = delta·τ + beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    pub characteristic: Rat,
    pub delta: f64,
    pub beta: f64,
    pub level: u32,
    pub frequency: u32,
}

impl ThetaParams {
    pub fn new(characteristic: Rat, level: u32, frequency: u32) -> Result<Self> {
        if level == 0 || frequency == 0 {
            return Err(Error::Malformed(format!(
                "theta level/frequency must be >= 1, got {level}/{frequency}"
            )));
        }
        Ok(Self {
            characteristic: crate::frac(characteristic),
            delta: 0.0,
            beta: 0.0,
            level,
            frequency,
        })
    }

    /// Classical `θ_τ(z)`.
    pub fn classical() -> Self {
        Self::new(Rat::new(0, 1), 1, 1).unwrap()
    }

    pub fn with_translation(mut self, delta: f64, beta: f64) -> Self {
        self.delta = delta;
        self.beta = beta;
        self
    }

    /// Decompose a raw complex translation against `τ`: `z0 = δτ + β` with
    /// `δ = Im z0 / A` and real `β`.
    pub fn with_translation_complex(self, z0: C64, tau: &TorusModulus) -> Self {
        let delta = z0.im / tau.area;
        let beta = z0.re - delta * tau.b_field;
        self.with_translation(delta, beta)
    }

    pub fn z0(&self, tau: &TorusModulus) -> C64 {
        self.delta * tau.tau() + self.beta
    }
}

/// Value plus the truncation index actually used (largest `|m|` summed).
#[derive(Debug, Clone, Copy)]
pub struct ThetaEval {
    pub value: C64,
    pub truncation_m: u64,
}

/// Evaluate the series to absolute accuracy `tol` (up to rounding).
pub fn theta_eval(p: &ThetaParams, tau: &TorusModulus, z: C64, tol: f64) -> Result<C64> {
    theta_deriv_eval_full(p, tau, z, 0, tol).map(|e| e.value)
}

pub fn theta_eval_full(p: &ThetaParams, tau: &TorusModulus, z: C64, tol: f64) -> Result<ThetaEval> {
    theta_deriv_eval_full(p, tau, z, 0, tol)
}

/// `D^order` applied to the series, summed term-wise.
pub fn theta_deriv_eval(
    p: &ThetaParams,
    tau: &TorusModulus,
    z: C64,
    order: u32,
    tol: f64,
) -> Result<C64> {
    theta_deriv_eval_full(p, tau, z, order, tol).map(|e| e.value)
}

pub fn theta_deriv_eval_full(
    p: &ThetaParams,
    tau: &TorusModulus,
    z: C64,
    order: u32,
    tol: f64,
) -> Result<ThetaEval> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    if order > DERIV_ORDER_CAP {
        return Err(Error::DerivativeOrder {
            got: order,
            cap: DERIV_ORDER_CAP,
        });
    }

    let a = rat_f64(p.characteristic);
    let lvl = f64::from(p.level);
    let freq = f64::from(p.frequency);
    let lam = lvl * tau.tau(); // the series' modulus Λ
    let w_full = freq * z + p.z0(tau); // the full second argument

    // Exact argument reduction: with w = w0 + sΛ + t (s, t integers chosen so
    // w0 sits in the waist of the series),
    //   θ[a](Λ, w) = e^{πi s²Λ - 2πi s w} · e^{2πi a t} · θ[a](Λ, w0),
    // and the index shift mixes derivative orders binomially:
    //   Σ (-(m+a)F)^o ... = prefactor · Σ_i C(o,i) (sF)^{o-i} · core_i(w0).
    let s = (w_full.im / lam.im).round();
    let t_shift = (w_full.re - s * lam.re).round();
    let w0 = w_full - s * lam - t_shift;
    let prefactor = (C64::new(0.0, PI) * (s * s * lam - 2.0 * s * w_full)).exp()
        * (C64::i() * TWO_PI * a * t_shift).exp();

    // Tail target for the cores, accounting for the assembly factors.
    let sf = (s * freq).abs();
    let assembly = prefactor.norm() * (1.0 + sf).powi(order as i32);
    let core_tol = (0.5 * tol / assembly.max(1.0)).max(1e-18);

    let la = lam.im;
    let y0 = w0.im;
    // exp(-π g(m)) with g an upward parabola; vertex at m* = -a - y0/la.
    let g = |m: f64| la * (m + a) * (m + a) + 2.0 * (m + a) * y0;
    let base_term = |m: f64| -> C64 {
        (C64::new(0.0, PI) * ((m + a) * (m + a) * lam + 2.0 * (m + a) * w0)).exp()
    };

    let n_cores = order as usize + 1;
    let mut cores = vec![KahanC64::default(); n_cores];
    let add_all = |m: f64, cores: &mut [KahanC64]| -> f64 {
        let base = base_term(m);
        let mut weight = C64::new(1.0, 0.0);
        for core in cores.iter_mut() {
            core.add(weight * base);
            weight *= -(m + a) * freq;
        }
        base.norm()
    };

    let center = (-a - y0 / la).round();
    add_all(center, &mut cores);
    let mut max_m = (center - s).abs();

    for dir in [1.0f64, -1.0] {
        let mut m = center;
        let mut guard = 0usize;
        loop {
            m += dir;
            guard += 1;
            if guard > 200_000 {
                return Err(Error::Malformed(
                    "theta series failed to converge within the step guard".into(),
                ));
            }
            let base_norm = add_all(m, &mut cores);
            max_m = max_m.max((m - s).abs());
            // One-sided geometric tail bound from the next term on, for the
            // highest-order core (its polynomial factor dominates).
            let d = PI * (g(m + dir) - g(m));
            if d <= 0.0 {
                continue; // still before the vertex on this side
            }
            let poly = ((m + a) * freq).abs().max(1.0).powi(order as i32);
            let poly_ratio = if order == 0 {
                1.0
            } else {
                let cur = ((m + a) * freq).abs().max(f64::MIN_POSITIVE);
                let next = ((m + dir + a) * freq).abs();
                (next / cur).powi(order as i32)
            };
            let r = poly_ratio * (-d).exp();
            if r < 1.0 {
                let dominant = base_norm * poly;
                let tail = dominant * r / (1.0 - r);
                if tail < core_tol && dominant < core_tol {
                    break;
                }
            }
        }
    }

    // Assemble D^order from the reduced cores.
    let mut value = C64::new(0.0, 0.0);
    let mut binom = 1.0f64;
    for i in (0..n_cores).rev() {
        // C(order, i) built incrementally from i = order downward
        if i < order as usize {
            binom *= (i + 1) as f64 / (order as usize - i) as f64;
        }
        value += C64::from(binom * (s * freq).powi((order as usize - i) as i32)) * cores[i].value();
    }
    value *= prefactor;

    Ok(ThetaEval {
        value,
        truncation_m: max_m as u64,
    })
}

/// Compensated accumulator; keeps the rounding error of the partial sums at
/// a few ulps of the largest term instead of growing with the term count.
#[derive(Clone, Default)]
struct KahanC64 {
    sum: C64,
    comp: C64,
}

impl KahanC64 {
    fn add(&mut self, t: C64) {
        let y = t - self.comp;
        let s = self.sum + y;
        self.comp = (s - self.sum) - y;
        self.sum = s;
    }

    fn value(&self) -> C64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tau_i() -> TorusModulus {
        TorusModulus::new(0.0, 1.0).unwrap()
    }

    /// Fixed-window partial summation, independent of the adaptive walk.
    fn brute(p: &ThetaParams, tau: &TorusModulus, z: C64, order: u32) -> C64 {
        let a = rat_f64(p.characteristic);
        let w = f64::from(p.frequency) * z + p.z0(tau);
        let mut s = C64::new(0.0, 0.0);
        for m in -60..=60 {
            let ma = m as f64 + a;
            let phase =
                C64::new(0.0, PI) * (ma * ma * f64::from(p.level) * tau.tau() + 2.0 * ma * w);
            let mut t = phase.exp();
            if order > 0 {
                t *= C64::from((-ma * f64::from(p.frequency)).powi(order as i32));
            }
            s += t;
        }
        s
    }

    #[test]
    fn vanishes_at_half_periods() {
        let p = ThetaParams::classical();
        let v = theta_eval(&p, &tau_i(), C64::new(0.5, 0.5), 1e-14).unwrap();
        assert!(v.norm() < 1e-13, "|θ(1/2+τ/2)| = {}", v.norm());
        // simple zero: first derivative bounded away from zero there
        let d = theta_deriv_eval(&p, &tau_i(), C64::new(0.5, 0.5), 1, 1e-12).unwrap();
        assert!(d.norm() > 0.1);
    }

    #[test]
    fn even_function() {
        let p = ThetaParams::classical();
        let z = C64::new(0.3, 0.1);
        let v1 = theta_eval(&p, &tau_i(), z, 1e-14).unwrap();
        let v2 = theta_eval(&p, &tau_i(), -z, 1e-14).unwrap();
        assert_abs_diff_eq!(v1.re, v2.re, epsilon = 1e-13);
        assert_abs_diff_eq!(v1.im, v2.im, epsilon = 1e-13);
    }

    #[test]
    fn value_at_origin_matches_partial_sums() {
        // Direct summation until the tail is < 1e-15 gives 1.0864348112133080
        // (= π^{1/4}/Γ(3/4)).
        let p = ThetaParams::classical();
        let v = theta_eval(&p, &tau_i(), C64::new(0.0, 0.0), 1e-15).unwrap();
        let oracle = brute(&p, &tau_i(), C64::new(0.0, 0.0), 0);
        assert!((v - oracle).norm() < 1e-14);
        assert_abs_diff_eq!(v.re, 1.086_434_811_213_308, epsilon = 1e-13);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn agrees_with_brute_force_on_general_parameters() {
        let tau = TorusModulus::new(0.3, 1.2).unwrap();
        for (num, den, lvl, freq, delta, beta) in [
            (0i64, 1i64, 1u32, 1u32, 0.0, 0.0),
            (1, 2, 2, 2, 0.2, -0.3),
            (1, 3, 3, 1, -0.4, 0.7),
            (5, 6, 4, 4, 0.1, 0.0),
        ] {
            let p = ThetaParams::new(Rat::new(num, den), lvl, freq)
                .unwrap()
                .with_translation(delta, beta);
            for z in [
                C64::new(0.11, 0.23),
                C64::new(-0.7, -0.2),
                C64::new(0.5, 0.9),
            ] {
                for order in [0u32, 1, 2, 3] {
                    let v = theta_deriv_eval(&p, &tau, z, order, 1e-13).unwrap();
                    let o = brute(&p, &tau, z, order);
                    // the oracle itself carries rounding at the value's scale
                    assert!(
                        (v - o).norm() < 1e-11 * o.norm().max(1.0),
                        "mismatch at a={num}/{den} lvl={lvl} order={order}: {v} vs {o}"
                    );
                }
            }
        }
    }

    #[test]
    fn quasi_periodicity() {
        let tau = TorusModulus::new(0.3, 1.2).unwrap();
        let p = ThetaParams::classical();
        let t = tau.tau();
        for k in 0..12 {
            let z = C64::new(0.09 * k as f64 - 0.4, 0.07 * k as f64 - 0.3);
            let v = theta_eval(&p, &tau, z, 1e-13).unwrap();
            let v1 = theta_eval(&p, &tau, z + 1.0, 1e-13).unwrap();
            assert!((v1 - v).norm() < 1e-12);
            let vt = theta_eval(&p, &tau, z + t, 1e-13).unwrap();
            let factor = (-C64::new(0.0, PI) * (t + 2.0 * z)).exp();
            assert!((vt - factor * v).norm() < 1e-11);
        }
    }

    #[test]
    fn characteristic_shift_identity() {
        // θ[a,0](τ,z) = e^{πi[a²τ + 2az]} θ_τ(z + aτ), and a ↦ a+1 reindexes.
        let tau = TorusModulus::new(0.3, 1.2).unwrap();
        let a = Rat::new(1, 3);
        let pa = ThetaParams::new(a, 1, 1).unwrap();
        let p0 = ThetaParams::classical();
        let af = 1.0 / 3.0;
        let z = C64::new(0.21, -0.13);
        let lhs = theta_eval(&pa, &tau, z, 1e-13).unwrap();
        let rhs = (C64::new(0.0, PI) * (af * af * tau.tau() + 2.0 * af * z)).exp()
            * theta_eval(&p0, &tau, z + af * tau.tau(), 1e-13).unwrap();
        assert!((lhs - rhs).norm() < 1e-11);

        let shifted = ThetaParams::new(a + 1, 1, 1).unwrap();
        assert_eq!(shifted.characteristic, pa.characteristic);
    }

    #[test]
    fn derivative_consistency() {
        let tau = tau_i();
        let p = ThetaParams::classical();
        // D of an even function vanishes at the origin.
        let d0 = theta_deriv_eval(&p, &tau, C64::new(0.0, 0.0), 1, 1e-13).unwrap();
        assert!(d0.norm() < 1e-13);
        // order 0 is the identity
        let z = C64::new(0.25, 0.0);
        let v = theta_eval(&p, &tau, z, 1e-13).unwrap();
        let v0 = theta_deriv_eval(&p, &tau, z, 0, 1e-13).unwrap();
        assert!((v - v0).norm() < 1e-14);
        // central finite difference of D = -(1/2πi) d/dz
        let h = 1e-5;
        let fp = theta_eval(&p, &tau, z + h, 1e-15).unwrap();
        let fm = theta_eval(&p, &tau, z - h, 1e-15).unwrap();
        let fd = -(fp - fm) / (2.0 * h) / C64::new(0.0, std::f64::consts::TAU);
        let d1 = theta_deriv_eval(&p, &tau, z, 1, 1e-13).unwrap();
        assert!((fd - d1).norm() / d1.norm() < 1e-6);
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = ThetaParams::classical();
        assert!(matches!(
            theta_eval(&p, &tau_i(), C64::new(0.0, 0.0), 0.0),
            Err(Error::InvalidTolerance(_))
        ));
        assert!(matches!(
            theta_deriv_eval(&p, &tau_i(), C64::new(0.0, 0.0), 17, 1e-10),
            Err(Error::DerivativeOrder { .. })
        ));
        assert!(ThetaParams::new(Rat::new(0, 1), 0, 1).is_err());
    }
}
