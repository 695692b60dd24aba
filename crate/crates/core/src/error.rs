use thiserror::Error;

use crate::critpoints::CritCensus;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("unsupported variable count {0} (expected 1..=3)")]
    VariableCount(usize),

    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    PointDimension { expected: usize, got: usize },

    #[error("degree {degree} outside supported range {min}..={max}")]
    DegreeOutOfRange { degree: usize, min: usize, max: usize },

    #[error("nonzero imaginary part on monomial {monomial:?} after real substitution")]
    ImaginaryResidue { monomial: Vec<u32> },

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("determinant routes disagree at size {0}")]
    DeterminantMismatch(usize),

    #[error("critical point census mismatch: found {found}, expected {expected}")]
    Census {
        found: usize,
        expected: usize,
        partial: Box<CritCensus>,
    },

    #[error("degenerate critical point at ({x}, {y})")]
    Degenerate { x: f64, y: f64 },

    #[error("critical point at ({x}, {y}) has unexpected value {value}")]
    UnexpectedValue { x: f64, y: f64, value: f64 },

    #[error("line extraction for d={d} produced {found} distinct lines")]
    LineCount { d: usize, found: usize },

    #[error("line fit residual {residual:e} exceeds tolerance")]
    LineFit { residual: f64 },

    #[error("arrangement is not simple: {0}")]
    NotSimple(String),

    #[error("arrangement needs at least two lines")]
    TooFewLines,

    #[error("polynomial does not vanish on line {index} (residual {residual:e})")]
    NotOnLine { index: usize, residual: f64 },

    #[error("could not place an interior sample in cell {0}")]
    InteriorPoint(usize),

    #[error("node certification failed: {0}")]
    NodeCertification(String),

    #[error("malformed polynomial serialization: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
