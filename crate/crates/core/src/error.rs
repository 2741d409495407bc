use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("SVD did not converge for a {rows}x{cols} matrix")]
    NonConvergence { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: expected {expected:?}, found {found:?}")]
    FieldMismatch {
        expected: crate::linalg::Field,
        found: crate::linalg::Field,
    },

    #[error("Clifford degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("subspace is not B-isotropic (residual {residual:.3e})")]
    NotIsotropic { residual: f64 },

    #[error("matrix is not a partial isometry (residual {residual:.3e})")]
    NotPartialIsometry { residual: f64 },

    #[error("subspace is not a Lagrangian: {0}")]
    NotLagrangian(String),

    #[error("block {block} is numerically singular (smallest singular value {sigma_min:.3e})")]
    SingularBlock { block: &'static str, sigma_min: f64 },

    #[error("matrix is numerically singular (smallest singular value {sigma_min:.3e})")]
    Singular { sigma_min: f64 },

    #[error("correspondences do not share the middle space: {0}")]
    SpaceMismatch(String),

    #[error("composed matrix is not unitary (residual {residual:.3e})")]
    NotUnitaryResult { residual: f64 },

    #[error("generators do not define a graded Clifford module: {0}")]
    NotAModule(String),

    #[error("unsupported Clifford degree {degree} for the {field:?} field")]
    UnsupportedDegree {
        degree: usize,
        field: crate::linalg::Field,
    },

    #[error("subspace is not invariant under the Clifford action (residual {residual:.3e})")]
    NotInvariant { residual: f64 },

    #[error("correspondence is neither a type (1) nor a type (2) morphism")]
    NotAMorphism,

    #[error("composition left the expected morphism type: expected {expected}, found {found}")]
    CategoryViolation { expected: String, found: String },

    #[error("symbol product leaves the supported grammar: {0}")]
    UnsupportedSymbols(String),

    #[error("bordisms cannot be glued: {0}")]
    NotComposableKinds(String),

    #[error("unsupported bordism: {0}")]
    UnsupportedBordism(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
