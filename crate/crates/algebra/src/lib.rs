//! Exact algebra over finite fields of characteristic 2.
//!
//! * [`field`]: GF(2^k) arithmetic, embeddings and composita.
//! * [`poly`]: sparse multivariate Laurent polynomials over a shared ring.
//! * [`parse`]: the text grammar for polynomials.
//! * [`univariate`]: squarefree, distinct-degree and equal-degree factorization.
//! * [`groebner`]: Buchberger bases, saturation, elimination, local multiplicities.
//! * [`solve`]: zero-dimensional solving with on-demand field extension.

pub mod field;
pub mod gf2x;
pub mod groebner;
pub mod parse;
pub mod poly;
pub mod solve;
pub mod univariate;

pub use field::{Embedding, Field, FieldElement};
pub use groebner::{GroebnerBasis, MonomialOrder};
pub use poly::{Monomial, Polynomial, Ring, VariableRegistry};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("reducible: {0}")]
    ReducibleModulus(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("zero assigned to inverted variable `{0}`")]
    ZeroAtInvertedVariable(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("negative exponent on non-inverted variable `{0}`")]
    NegativeExponent(String),
    #[error("not univariate: {0}")]
    NotUnivariate(String),
    #[error("not zero-dimensional")]
    NotZeroDimensional,
    #[error("solutions require larger extension (degree {needed} > {max})")]
    ExtensionTooSmall { needed: u32, max: u32 },
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
