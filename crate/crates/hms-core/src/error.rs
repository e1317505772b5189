use thiserror::Error;

/// Errors surfaced by the category and numerics layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("derivative order {got} exceeds cap {cap}")]
    DerivativeOrder { got: u32, cap: u32 },
    #[error("matrix is not nilpotent (‖N^dim‖ = {residual:.3e})")]
    NotNilpotent { residual: f64 },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("geodesics are not transversal ({0})")]
    NonTransversal(String),
    #[error("branes lie on distinct geodesics; no intertwiner homs")]
    DistinctGeodesics,
    #[error("morphism endpoints do not match: {0}")]
    EndpointMismatch(String),
    #[error("isogeny levels differ ({0} vs {1}); reduce through the cover first")]
    LevelMismatch(u32, u32),
    #[error("composition degrees invalid: {0}")]
    DegreeMismatch(String),
    #[error("least-squares system ill-conditioned (cond ≈ {cond:.3e}); resample")]
    IllConditioned { cond: f64 },
    #[error("theta term is not an element of the canonical hom basis: {0}")]
    NotCanonicalBasis(String),
    #[error("malformed descriptor: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
