use thiserror::Error;

use crate::ComplexPoint;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-domain input.
    Input,
    /// A constructor could not produce the requested object.
    Construction,
    /// Numerical evaluation failed.
    Evaluation,
    /// A mathematical hypothesis of the requested certification is violated.
    Hypothesis,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("zero not in open upper half-plane: {re} + {im}i")]
    NotInUpperHalfPlane { re: f64, im: f64 },

    #[error("pole hit at {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("non-integrable boundary data: {0}")]
    NonIntegrable(String),

    #[error("quadrature failed to converge on [{a}, {b}] (error estimate {error:e})")]
    Quadrature { a: f64, b: f64, error: f64 },

    #[error("zero of f on the Carleman contour near {re} + {im}i")]
    ZeroOnContour { re: f64, im: f64 },

    #[error("non-invertible at z = {re} + {im}i (|det| = {det_abs:e})")]
    NonInvertible { re: f64, im: f64, det_abs: f64 },

    #[error("evaluation failed at x = {x}: {reason}")]
    EvaluationAt { x: f64, reason: String },

    #[error("eigenvalue computation did not converge")]
    EigenFailure,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidInput(_) | Error::NotInUpperHalfPlane { .. } => ErrorKind::Input,
            Error::Construction(_) => ErrorKind::Construction,
            Error::Pole { .. }
            | Error::NonIntegrable(_)
            | Error::Quadrature { .. }
            | Error::ZeroOnContour { .. }
            | Error::NonInvertible { .. }
            | Error::EvaluationAt { .. }
            | Error::EigenFailure => ErrorKind::Evaluation,
            Error::HypothesisViolated(_) => ErrorKind::Hypothesis,
        }
    }

    pub(crate) fn pole(z: ComplexPoint) -> Self {
        Error::Pole { re: z.re, im: z.im }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
