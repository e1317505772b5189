//! B-side objects in Atiyah normal form.

use crate::numerics::NilpotentMatrix;
use crate::{fracf, Rat, Result};

/// Indecomposable-form bundle descriptor
/// `π_{r*}( L(φ) ⊗ F(V, exp N) )`, where `φ = (t*_x φ0) · φ0^{n-1}` and the
/// inner bundle lives on the covering curve of modulus `rτ`.
///
/// The twist translation is `x = a·(rτ) + b`, coordinates against the inner
/// curve's modulus; both components are reduced modulo 1 (the translation
/// identity `t*_δ φ0^k = e^{-2πiδk} φ0^k` makes integer shifts isomorphic,
/// with the scalar absorbed into section coefficients).
#[derive(Debug, Clone, PartialEq)]
pub struct BundleDesc {
    /// Per-level degree `n` (the theta level of the inner line bundle).
    pub degree: i64,
    /// τ-component `a` of the twist, exact.
    pub twist_a: Rat,
    /// Real component `b` of the twist, in `[0, 1)`.
    pub twist_b: f64,
    /// Nilpotent part `N` of the flat factor; fiber dimension is its size.
    pub nil: NilpotentMatrix,
    /// Isogeny level `r ≥ 1`: the object is the pushforward along the
    /// `r`-fold cover of the level-`rτ` bundle.
    pub level: u32,
}

impl BundleDesc {
    pub fn new(
        degree: i64,
        twist_a: Rat,
        twist_b: f64,
        nil: NilpotentMatrix,
        level: u32,
    ) -> Result<Self> {
        if level == 0 {
            return Err(crate::Error::Malformed("isogeny level must be >= 1".into()));
        }
        Ok(Self {
            degree,
            twist_a: crate::frac(twist_a),
            twist_b: fracf(twist_b),
            nil,
            level,
        })
    }

    /// The structure sheaf `O`.
    pub fn structure_sheaf() -> Self {
        Self::line_bundle_power(0)
    }

    /// `L^n` for the fixed degree-one bundle `L = L(φ0)`.
    pub fn line_bundle_power(n: i64) -> Self {
        Self {
            degree: n,
            twist_a: Rat::new(0, 1),
            twist_b: 0.0,
            nil: NilpotentMatrix::zero(1),
            level: 1,
        }
    }

    /// Rank-1 level-1 bundle `t*_{aτ+b} L ⊗ L^{n-1}`.
    pub fn twisted(n: i64, a: Rat, b: f64) -> Self {
        Self::new(n, a, b, NilpotentMatrix::zero(1), 1).unwrap()
    }

    pub fn fiber_dim(&self) -> usize {
        self.nil.dim()
    }

    /// Rank of the pushforward object.
    pub fn rank(&self) -> usize {
        self.level as usize * self.fiber_dim()
    }

    /// Sheaf-theoretic degree: the flat factor multiplies the inner degree by
    /// the fiber dimension, and pushforward along an unramified cover
    /// preserves it.
    pub fn sheaf_degree(&self) -> i64 {
        self.degree * self.fiber_dim() as i64
    }

    /// Indecomposable exactly when `N` has a one-dimensional kernel (rank-1
    /// fibers count as indecomposable).
    pub fn is_indecomposable(&self) -> bool {
        self.fiber_dim() == 1 || self.nil.kernel_dim() == 1
    }

    pub fn same_twist(&self, other: &Self) -> bool {
        self.twist_a == other.twist_a && (self.twist_b - other.twist_b).abs() < 1e-12
    }
}

/// Torsion sheaf `S(ζ0, V, N)` supported at the single point `ζ0 = -aτ - b`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionDesc {
    pub point_a: Rat,
    pub point_b: f64,
    pub nil: NilpotentMatrix,
}

impl TorsionDesc {
    pub fn new(point_a: Rat, point_b: f64, nil: NilpotentMatrix) -> Self {
        Self {
            point_a: crate::frac(point_a),
            point_b: fracf(point_b),
            nil,
        }
    }

    pub fn fiber_dim(&self) -> usize {
        self.nil.dim()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.fiber_dim() == 1 || self.nil.kernel_dim() == 1
    }

    pub fn same_support(&self, other: &Self) -> bool {
        self.point_a == other.point_a && (self.point_b - other.point_b).abs() < 1e-12
    }
}
