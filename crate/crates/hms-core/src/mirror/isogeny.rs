//! Isogeny functors on both sides: the r-fold cover on the complex side and
//! the x-stretch on the symplectic side, exchanged by the mirror functor.

use crate::fukaya::{Brane, BraneTuple, Monodromy, Slope};
use crate::numerics::nilpotent_exp;
use crate::sheaves::BundleDesc;
use crate::{frac, CMat, Error, Rat, Result, C64};

/// Pushforward along the r-fold cover: the descriptor's isogeny level
/// multiplies, and the flat factor becomes the cyclic-shift block
/// `(v_1, ..., v_r) ↦ (v_2, ..., v_r, A·v_1)` returned explicitly.
pub fn pushforward_bundle(a: &BundleDesc, r: u32) -> Result<(BundleDesc, CMat)> {
    if r == 0 {
        return Err(Error::Malformed("isogeny degree must be >= 1".into()));
    }
    let desc = BundleDesc {
        level: a.level * r,
        ..a.clone()
    };
    let d = a.fiber_dim();
    let m = nilpotent_exp(&a.nil, C64::new(1.0, 0.0));
    let n = d * r as usize;
    let mut block = CMat::zeros(n, n);
    for i in 0..(r as usize - 1) {
        block
            .view_mut((i * d, (i + 1) * d), (d, d))
            .copy_from(&CMat::identity(d, d));
    }
    block
        .view_mut(((r as usize - 1) * d, 0), (d, d))
        .copy_from(&m);
    Ok((desc, block))
}

/// Pullback along the r-fold cover, on level-1 descriptors: degree and
/// nilpotent part multiply (`F(V, A) ↦ F(V, A^r)`), the twist point is
/// preserved, and the result lives on the covering curve of modulus `rτ`
/// (its `a`-component is re-expressed against that modulus).
pub fn pullback_bundle(a: &BundleDesc, r: u32) -> Result<(BundleDesc, CMat)> {
    if r == 0 {
        return Err(Error::Malformed("isogeny degree must be >= 1".into()));
    }
    if a.level != 1 {
        return Err(Error::LevelMismatch(a.level, 1));
    }
    let desc = BundleDesc::new(
        a.degree * r as i64,
        a.twist_a / Rat::from_integer(r as i64),
        a.twist_b,
        a.nil.scale(r as f64),
        1,
    )?;
    let m = nilpotent_exp(&a.nil, C64::new(1.0, 0.0));
    let mut power = CMat::identity(a.fiber_dim(), a.fiber_dim());
    for _ in 0..r {
        power = &power * &m;
    }
    Ok((desc, power))
}

/// Same-interval grading transfer: the unique value with the new slope's
/// direction lying in the `[k-1/2, k+1/2)` window that contained `alpha`.
fn transfer_alpha(alpha: f64, new_slope: Slope) -> f64 {
    let window = (alpha + 0.5).floor();
    let base = new_slope.base_alpha();
    base + window - (base + 0.5).floor()
}

/// Pushforward of a brane along the x-stretch `(x, y) ↦ (rx, y)`.
///
/// The slope `p/q` rescales to `p/(rq)`; the restriction of the stretch to
/// the geodesic is a `d = gcd(p, r)`-fold cover, so the local system pushes
/// to the cyclic block, which decomposes into `d` summands with phases
/// `(b+j)/d` and nilpotent part `N/d`.
pub fn pushforward_brane(o: &Brane, r: u32) -> Result<BraneTuple> {
    if r == 0 {
        return Err(Error::Malformed("isogeny degree must be >= 1".into()));
    }
    let slope = Slope::new(o.slope.p, o.slope.q * r as i64)?;
    let intercept = if o.slope.is_horizontal() {
        o.intercept
    } else {
        frac(o.intercept * Rat::from_integer(r as i64))
    };
    let alpha = transfer_alpha(o.alpha, slope);
    let d = num_integer::gcd(o.slope.p.abs(), r as i64).max(1);
    let branes = (0..d)
        .map(|j| {
            let phase = crate::fracf((o.monodromy.phase_b + j as f64) / d as f64);
            let nil = o.monodromy.nil.scale(1.0 / d as f64);
            Brane::new(slope, intercept, alpha, Monodromy::new(phase, nil))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BraneTuple(branes))
}

/// Pullback of a brane along the x-stretch: the preimage of a slope `p/q`
/// geodesic has `N = gcd(r, q)` components of slope `rp/q` (so pulling back
/// the pushforward of a slope-`n` brane gives `r/gcd(n,r)` components), each
/// covering the base `r/N` times, hence carrying monodromy `M^{r/N}`.
pub fn pullback_brane(o: &Brane, r: u32) -> Result<BraneTuple> {
    if r == 0 {
        return Err(Error::Malformed("isogeny degree must be >= 1".into()));
    }
    let g = num_integer::gcd(r as i64, o.slope.q).max(1);
    let slope = Slope::new(o.slope.p * r as i64, o.slope.q)?;
    let alpha = transfer_alpha(o.alpha, slope);
    let cover_deg = (r as i64 / g) as f64;
    let c_base = o.line_constant();
    let branes = (0..g)
        .map(|j| {
            // component line constant (c + j)/g; recover the stored intercept
            let c = (c_base + Rat::from_integer(j)) / Rat::from_integer(g);
            let intercept = if slope.is_horizontal() {
                frac(-c)
            } else {
                frac(c / Rat::from_integer(slope.p))
            };
            let phase = crate::fracf(o.monodromy.phase_b * cover_deg);
            let nil = o.monodromy.nil.scale(cover_deg);
            Brane::new(slope, intercept, alpha, Monodromy::new(phase, nil))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BraneTuple(branes))
}
