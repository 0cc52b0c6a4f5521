//! Dense linear algebra over [`Scalar`](crate::scalar::Scalar) fields.

pub mod elimination;
pub mod matrix;
pub mod modp;
pub mod subspace;

pub use elimination::{inverse, min_norm_solve, nullspace, rank, row_basis, MinNormSolver, RowBasis};
pub use matrix::{dot, weighted_dot, Matrix};
pub use subspace::{SubspaceBasis, SubspaceOp};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("subspaces live in different ambient spaces ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("right-hand side is not in the range (residual {residual:e})")]
    InconsistentSystem { residual: f64 },
    #[error("matrix is singular")]
    Singular,
}
