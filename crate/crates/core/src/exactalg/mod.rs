//! Exact linear algebra over the rationals and prime fields, polynomial
//! arithmetic, and integer normal forms.
//!
//! Everything here is a pure function of its inputs. Pivoting is
//! deterministic (first nonzero entry, scanning columns left to right) so
//! that echelon forms, kernels and solutions are reproducible.

mod field;
mod integer;
mod matrix;
mod poly;
mod subspace;

pub use field::{signum, Field, FieldScalar};
pub use integer::{IntMatrix, IntegerSolution, SmithDecomposition};
pub use matrix::{Matrix, Rref};
pub use poly::Polynomial;
pub use subspace::Subspace;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported in characteristic {characteristic}: {what}")]
    UnsupportedCharacteristic { characteristic: u64, what: String },
}
