//! Exact scalar arithmetic over GF(2) and Q, sparse linear algebra, and
//! Laurent polynomials with half-integer exponents.
//!
//! No floating point appears anywhere in this crate; gradings are stored
//! as doubled integers and coefficients as arbitrary-precision rationals.

mod halfint;
mod laurent;
mod matrix;
mod scalar;

pub use halfint::HalfInt;
pub use laurent::{LaurentPoly, PolyError};
pub use matrix::{SparseMatrix, SparseVec};
pub use scalar::{rat, rat_int, rat_is_negative, FieldKind, FieldScalar};
