//! Verification engine for purely inseparable double covers of surfaces in
//! characteristic 2: atlases and singular points, derivations, double-point
//! classification and two-dimensional restricted Lie algebras.

pub mod derivation;
pub mod expr;
pub mod geometry;
pub mod input;
pub mod jet;
pub mod liealg;
pub mod pipeline;
pub mod registry;
pub mod report;
pub mod singclass;

use algebra::AlgebraError;

#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("point not singular")]
    NotSingular,
    #[error("jacobian rank {rank} at the point is below {needed}")]
    RankTooLow { rank: usize, needed: usize },
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("{0}")]
    Geometry(String),
    #[error("{0}")]
    Derivation(String),
    #[error("{0}")]
    Classifier(String),
    #[error("internal assertion: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
