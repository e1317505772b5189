//! Nilpotent endomorphisms and their finite exponentials.

use crate::{CMat, Error, Result, C64};

/// Entry threshold below which a power is declared exactly zero; inputs are
/// small integer-like matrices, so this is far from any genuine value.
const ZERO_THRESHOLD: f64 = 1e-13;

/// A verified-nilpotent square matrix `N` with `N^dim = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotentMatrix {
    dim: usize,
    entries: CMat,
}

impl NilpotentMatrix {
    /// Checks nilpotency at construction by repeated multiplication.
    pub fn new(entries: CMat) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        let dim = entries.nrows();
        let mut pow = entries.clone();
        for _ in 1..dim {
            pow = &pow * &entries;
        }
        let residual = pow.iter().map(|e| e.norm()).fold(0.0f64, f64::max);
        if residual > ZERO_THRESHOLD {
            return Err(Error::NotNilpotent { residual });
        }
        Ok(Self { dim, entries })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: CMat::zeros(dim, dim),
        }
    }

    /// Single Jordan block `J_dim` with ones on the superdiagonal.
    pub fn jordan(dim: usize) -> Self {
        let mut m = CMat::zeros(dim, dim);
        for i in 0..dim.saturating_sub(1) {
            m[(i, i + 1)] = C64::new(1.0, 0.0);
        }
        Self { dim, entries: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.map(|e| e * s),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.norm() <= ZERO_THRESHOLD)
    }

    /// Indecomposable local systems / sheaves need `dim ker N = 1`.
    pub fn kernel_dim(&self) -> usize {
        if self.dim == 0 {
            return 0;
        }
        let svd = self.entries.clone().svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let cut = (smax * 1e-10).max(ZERO_THRESHOLD);
        self.dim - svd.singular_values.iter().filter(|&&s| s > cut).count()
    }
}

/// `exp(tN) = Σ_{j<dim} (tN)^j / j!`, exact as a finite sum.
pub fn nilpotent_exp(n: &NilpotentMatrix, t: C64) -> CMat {
    let d = n.dim();
    let mut result = CMat::identity(d, d);
    let mut pow = CMat::identity(d, d);
    let mut fact = 1.0f64;
    for j in 1..d {
        pow = &pow * n.matrix();
        fact *= j as f64;
        result += pow.map(|e| e * t.powu(j as u32) / fact);
    }
    result
}
