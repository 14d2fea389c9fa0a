use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value encountered at CG iteration {iteration}")]
    NonFinite { iteration: usize },

    #[error("matrix is not positive definite ({0})")]
    NotPositiveDefinite(String),

    #[error("diagonal entry {index} is {value}, Jacobi scaling needs a positive diagonal")]
    NonPositiveDiagonal { index: usize, value: f64 },

    #[error("matrix is singular to working precision (pivot column {column})")]
    Singular { column: usize },

    #[error("matrix dimension {n} exceeds dense cap {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "image size {width}x{height} is not divisible by patch size {patch}; resize or crop first"
    )]
    NotDivisible {
        width: usize,
        height: usize,
        patch: usize,
    },

    #[error("CG did not converge in {iterations} iterations (relative residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("patch (row {row}, col {col}): {source}")]
    Patch {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported image format {format} for {path}")]
    UnsupportedFormat { path: PathBuf, format: String },

    #[error("metric unavailable: {0}")]
    MetricUnavailable(&'static str),

    #[error(transparent)]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        });
    }
    Ok(())
}
