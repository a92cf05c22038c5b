use thiserror::Error;

use crate::instances::format::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.6e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("operator is not positive (Hermitian PSD required)")]
    NotPositive,

    #[error("range inclusion fails (relative residual {residual:.3e})")]
    RangeNotIncluded { residual: f64 },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(String),

    #[error("index {index} out of range for family of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("length mismatch: {left} bounds vs {right} coefficients")]
    LengthMismatch { left: usize, right: usize },

    #[error("frame bound must be positive and finite, got {0}")]
    NonPositiveBound(f64),

    #[error("invalid frame bounds: lower {lower} exceeds upper {upper}")]
    BoundsOrder { lower: f64, upper: f64 },

    #[error("all combination coefficients are zero")]
    ZeroCoefficients,

    #[error("operator product has zero norm")]
    ZeroTailNorm,

    #[error("operator norm {norm} is below one")]
    NormBelowOne { norm: f64 },

    #[error("commutator residual {residual:.3e} exceeds tolerance")]
    CommutatorTooLarge { residual: f64 },

    #[error("system is not tight with the requested constant")]
    NotTight,

    #[error("K* is not surjective (smallest singular value {sigma_min:.3e})")]
    KStarNotSurjective { sigma_min: f64 },

    #[error("system is not a K-bi-g-frame")]
    NotKBiGFrame,

    #[error("invalid parameters: {0}")]
    ParamsInvalid(String),

    #[error("invalid generator spec: {0}")]
    SpecInvalid(String),

    #[error("parse: {0}")]
    Parse(#[from] ParseError),
}
