use thiserror::Error;

/// Errors raised by the algebra, classification and census routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {dim} outside supported range {min}..={max}")]
    DimensionOutOfRange { dim: usize, min: usize, max: usize },

    #[error("enumeration too large: n = {n} (supported 1..={max})")]
    EnumerationTooLarge { n: usize, max: usize },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("not a basis change: matrix is singular over GF(2)")]
    NotABasisChange,

    #[error("pivot not applicable at (k, p, q) = ({k}, {p}, {q})")]
    PivotNotApplicable { k: usize, p: usize, q: usize },

    #[error("integer overflow in unimodular arithmetic")]
    Overflow,

    #[error("matrix is not unimodular over the integers")]
    NotUnimodular,

    #[error("not an elementary matrix: {0}")]
    NotElementary(String),

    #[error("no graded involution exists: quantum matrix is not elementary")]
    NoGradedInvolution,

    #[error("parse error at row {row}, column {col}: {message}")]
    Parse { row: usize, col: usize, message: String },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("coset pattern must contain the zero class")]
    MissingZero,

    #[error("alternating form has odd rank {0}")]
    OddRank(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(dim: usize, min: usize, max: usize) -> Result<()> {
    if dim < min || dim > max {
        Err(Error::DimensionOutOfRange { dim, min, max })
    } else {
        Ok(())
    }
}

pub(crate) fn check_size(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::SizeMismatch { expected, found })
    } else {
        Ok(())
    }
}
