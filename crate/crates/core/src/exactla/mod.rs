//! Exact scalar and dense-matrix arithmetic over the rationals and prime fields.
//!
//! Nothing here touches floating point. Rank and kernel computations over the rationals use
//! fraction-free elimination; over `F_p` they use ordinary Gaussian elimination.

mod elim;
mod field;
mod matrix;

pub use field::{FieldSpec, Prime, Scalar};
pub use matrix::{
    block_diagonal, commutator, dot, elementary_matrix, identity, kernel_basis, rank,
    row_space_basis, span_rank, Matrix, Vector,
};

pub(crate) use elim::inv_mod;
pub(crate) use matrix::sparse_commute;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{op}: dimension mismatch ({left_rows}x{left_cols} vs {right_rows}x{right_cols})")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("index ({row}, {col}) out of range for a {dim}x{dim} matrix (indices are 1-based)")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },
    #[error("{0}: matrix must be square")]
    NotSquare(&'static str),
    #[error("{0}: empty input")]
    Empty(&'static str),
    #[error("vector length {found} does not match expected length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
}
