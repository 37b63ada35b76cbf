use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("row {row}, column {column}: cannot parse {value:?} as a number")]
    ParseCell {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("row {row}: missing label value in column {column}")]
    MissingLabel { row: usize, column: usize },

    #[error("row {row}: label {value} is not one of -1, 0, +1")]
    BadLabel { row: usize, value: f64 },

    #[error("row {row}: non-finite feature value in column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("row {row} has {found} columns, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("dimension mismatch: expected {expected} features, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "column {column} has zero standard deviation; run drop_zero_variance before normalizing"
    )]
    ZeroStd { column: usize },

    #[error("every column has zero variance")]
    AllColumnsConstant,

    #[error("class {0} has no instances")]
    MissingClass(i8),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lp is malformed: {0}")]
    MalformedLp(String),

    #[error("simplex basis became numerically singular")]
    SingularBasis,

    #[error("simplex exceeded {0} iterations: cycling suspected")]
    IterationLimit(usize),

    #[error(
        "lcc program is infeasible: classes have (near-)identical centers or |sigma| ({sigma_abs}) exceeds ||C1 - C-1||_1 ({center_gap})"
    )]
    Infeasible { sigma_abs: f64, center_gap: f64 },

    #[error(
        "linear program reported unbounded; this indicates a solver defect for a boxed problem"
    )]
    Unbounded,

    #[error("regularized scatter matrix is singular; use a regularization weight below 1")]
    SingularScatter,

    #[error("model file: {0}")]
    ModelFormat(String),
}

impl Error {
    /// True for errors caused by the numerics of the data rather than by usage.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Infeasible { .. }
                | Error::Unbounded
                | Error::IterationLimit(_)
                | Error::SingularBasis
                | Error::SingularScatter
                | Error::ZeroStd { .. }
                | Error::AllColumnsConstant
                | Error::MissingClass(_)
        )
    }
}
