use thiserror::Error;

use crate::scalar::Field;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("field mismatch: expected {expected:?}, found {found:?}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("length mismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("imaginary part {im} at position {index} in a real vector")]
    ImaginaryInReal { index: usize, im: f64 },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("vector system must contain at least one vector")]
    EmptySystem,

    #[error("invalid tolerance {name} = {value}: must lie in (0, 1)")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("vector system is linearly dependent (min pivot {min_pivot:e}, max pivot {max_pivot:e})")]
    LinearlyDependent { min_pivot: f64, max_pivot: f64 },

    #[error("Gram matrix is not positive semidefinite: pivot {pivot:e} with max pivot {max_pivot:e}")]
    NotPositiveSemidefinite { pivot: f64, max_pivot: f64 },

    #[error("vector lies in the orthogonal complement of the span (max |<x,x_i>| = {max_coefficient:e})")]
    InOrthogonalComplement { max_coefficient: f64 },

    #[error("system is not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("system is pairwise orthogonal; strict Hadamard inequality does not apply")]
    PairwiseOrthogonal,

    #[error("vector {index} is zero")]
    ZeroVector { index: usize },

    #[error("split index {k} out of range for a system of {n} vectors")]
    InvalidSplit { k: usize, n: usize },

    #[error("need at least {required} vectors, found {found}")]
    TooFewVectors { required: usize, found: usize },

    #[error("invalid exponent {0}: must be finite and > 1")]
    InvalidExponent(f64),

    #[error(
        "interval condition fails: Re<sum Gamma_i x_i - x, x - sum gamma_i x_i> = {inner:e}, \
         |x - center|^2 = {center_dist_sq:e}, radius^2 = {radius_sq:e}"
    )]
    ConditionViolated {
        inner: f64,
        center_dist_sq: f64,
        radius_sq: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by an unmet numerical precondition, as opposed
    /// to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::LinearlyDependent { .. }
                | Error::NotPositiveSemidefinite { .. }
                | Error::InOrthogonalComplement { .. }
                | Error::NotOrthonormal { .. }
                | Error::PairwiseOrthogonal
                | Error::ZeroVector { .. }
                | Error::ConditionViolated { .. }
                | Error::Numerical(_)
        )
    }
}
