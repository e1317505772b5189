//! Objects of the symplectic side: graded closed geodesics with flat local
//! systems whose monodromy has unit-modulus eigenvalues.

use crate::numerics::{nilpotent_exp, sylvester_kernel, NilpotentMatrix};
use crate::{rat_f64, CMat, Error, Rat, Result, C64};
use std::f64::consts::{PI, TAU};

/// Reduced slope `p/q` of a geodesic, with `q >= 0` and vertical encoded as
/// `(1, 0)`. The primitive period vector of the geodesic is `(q, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q < 0 {
            return Self::new(-p, -q);
        }
        if p == 0 && q == 0 {
            return Err(Error::Malformed("slope 0/0".into()));
        }
        let g = num_integer::gcd(p.abs(), q);
        let (p, q) = (p / g, q / g);
        if q == 0 && p != 1 {
            // vertical is (1,0) by convention
            return Ok(Self { p: 1, q: 0 });
        }
        Ok(Self { p, q })
    }

    pub fn integer(n: i64) -> Self {
        Self { p: n, q: 1 }
    }

    pub fn vertical() -> Self {
        Self { p: 1, q: 0 }
    }

    pub fn is_vertical(&self) -> bool {
        self.q == 0
    }

    pub fn is_horizontal(&self) -> bool {
        self.p == 0
    }

    /// Grading of the unshifted brane: `e^{iπα}` parallel to `(q, p)`,
    /// normalized to `(-1/2, 1/2]` (vertical gets exactly `1/2`).
    pub fn base_alpha(&self) -> f64 {
        if self.is_vertical() {
            0.5
        } else {
            (self.p as f64 / self.q as f64).atan() / PI
        }
    }
}

/// Monodromy `M = e^{-2πi·phase_b}·exp(nil)`; all eigenvalues have unit
/// modulus by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Monodromy {
    pub phase_b: f64,
    pub nil: NilpotentMatrix,
}

impl Monodromy {
    pub fn new(phase_b: f64, nil: NilpotentMatrix) -> Self {
        Self { phase_b, nil }
    }

    pub fn trivial(rank: usize) -> Self {
        Self::new(0.0, NilpotentMatrix::zero(rank))
    }

    pub fn rank(&self) -> usize {
        self.nil.dim()
    }

    pub fn matrix(&self) -> CMat {
        self.transport(1.0)
    }

    /// Parallel transport over a signed fraction `l` of the geodesic:
    /// `P = M^l = e^{-2πi·phase_b·l}·exp(nil·l)`.
    pub fn transport(&self, l: f64) -> CMat {
        let scalar = (-C64::i() * TAU * self.phase_b * l).exp();
        nilpotent_exp(&self.nil, C64::from(l)).map(|e| e * scalar)
    }
}

/// A-side object `(L, α, M)`: geodesic, grading, monodromy.
#[derive(Debug, Clone, PartialEq)]
pub struct Brane {
    pub slope: Slope,
    /// x-intercept for non-horizontal geodesics, y-intercept for horizontal,
    /// reduced into `[0, 1)`.
    pub intercept: Rat,
    pub alpha: f64,
    pub monodromy: Monodromy,
}

impl Brane {
    pub fn new(slope: Slope, intercept: Rat, alpha: f64, monodromy: Monodromy) -> Result<Self> {
        // e^{iπα} must be parallel to the direction (q,p) up to sign.
        let off = alpha - slope.base_alpha();
        if (off - off.round()).abs() > 1e-9 {
            return Err(Error::Malformed(format!(
                "grading {alpha} incompatible with slope {}/{}",
                slope.p, slope.q
            )));
        }
        Ok(Self {
            slope,
            intercept: crate::frac(intercept),
            alpha,
            monodromy,
        })
    }

    /// Brane with the canonical grading in `(-1/2, 1/2]`.
    pub fn with_base_grading(slope: Slope, intercept: Rat, monodromy: Monodromy) -> Self {
        Self {
            slope,
            intercept: crate::frac(intercept),
            alpha: slope.base_alpha(),
            monodromy,
        }
    }

    pub fn rank(&self) -> usize {
        self.monodromy.rank()
    }

    /// Shift functor: `(L, α, M)[n] = (L, α+n, M)`.
    pub fn shift(&self, n: i64) -> Self {
        let mut b = self.clone();
        b.alpha += n as f64;
        b
    }

    /// Direction sign of the orientation induced by the grading, relative to
    /// the primitive period vector `(q, p)`. Odd shifts reverse it.
    pub fn orientation_sign(&self) -> f64 {
        let dot = (PI * self.alpha).cos() * self.slope.q as f64
            + (PI * self.alpha).sin() * self.slope.p as f64;
        if dot >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Signed fraction of the geodesic traversed by a straight displacement
    /// `d` (which must be parallel to the geodesic) in the universal cover.
    pub fn traversal_fraction(&self, d: (Rat, Rat)) -> f64 {
        let (q, p) = (self.slope.q as f64, self.slope.p as f64);
        let num = rat_f64(d.0) * q + rat_f64(d.1) * p;
        self.orientation_sign() * num / (q * q + p * p)
    }

    /// Same underlying geodesic (slope and lattice class of the intercept).
    pub fn same_geodesic(&self, other: &Brane) -> bool {
        self.slope == other.slope && self.line_class() == other.line_class()
    }

    /// The invariant `c mod 1` of the lifted line `p·x - q·y = c`.
    pub fn line_class(&self) -> Rat {
        crate::frac(self.line_constant())
    }

    /// `c` for the lift anchored at the stored intercept.
    pub fn line_constant(&self) -> Rat {
        if self.slope.is_horizontal() {
            -self.intercept
        } else {
            Rat::from_integer(self.slope.p) * self.intercept
        }
    }
}

/// Formal biproduct: an ordered tuple of branes. Morphisms between tuples are
/// matrices of single-brane morphisms.
#[derive(Debug, Clone, PartialEq)]
pub struct BraneTuple(pub Vec<Brane>);

impl BraneTuple {
    pub fn shift(&self, n: i64) -> Self {
        BraneTuple(self.0.iter().map(|b| b.shift(n)).collect())
    }
}

impl From<Brane> for BraneTuple {
    fn from(b: Brane) -> Self {
        BraneTuple(vec![b])
    }
}

/// Maslov index `μ(L1, L2) = ceil(α1 - α2)`.
pub fn maslov(l1: &Brane, l2: &Brane) -> i64 {
    maslov_alpha(l1.alpha, l2.alpha)
}

/// `ceil(α1 - α2)`, with near-integer differences snapped before rounding.
pub fn maslov_alpha(alpha1: f64, alpha2: f64) -> i64 {
    let d = alpha1 - alpha2;
    let snapped = if (d - d.round()).abs() < 1e-12 {
        d.round()
    } else {
        d
    };
    snapped.ceil() as i64
}

/// Basis of `Hom(M1, M2)` for branes on the same geodesic; composition of
/// intertwiners is matrix product.
pub fn intertwiner_hom(o1: &Brane, o2: &Brane) -> Result<Vec<CMat>> {
    if !o1.same_geodesic(o2) {
        return Err(Error::DistinctGeodesics);
    }
    Ok(sylvester_kernel(
        &o1.monodromy.matrix(),
        &o2.monodromy.matrix(),
    ))
}
