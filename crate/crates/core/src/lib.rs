//! Numerical machinery for holomorphic functions on the upper half-plane that
//! have no zeros in the strip `0 < Im z < 1`.
//!
//! The crate is organised bottom-up:
//!
//! * [`domain`] and [`zeros`] hold the shared value types (zero sets, growth
//!   envelopes, separation parameters, rate functions) and the elementary
//!   functionals on them.
//! * [`blaschke`] evaluates half-plane Blaschke factors and the convergence
//!   corrected factors, builds the extremal products and certifies truncation
//!   tails.
//! * [`model`] is an evaluable catalogue of holomorphic functions used as test
//!   subjects throughout.
//! * [`quadrature`] and [`factorization`] provide the Poisson, uniqueness,
//!   Harnack and Carleman integrals.
//! * [`certify`] turns those into ratio profiles, the dyadic estimator for
//!   separated zero sets and assembled lower bounds.
//! * [`operator`] covers finite-rank reductions, Fredholm determinants, the
//!   regularized inverse and inverse-norm certificates.

pub mod blaschke;
pub mod certify;
pub mod domain;
pub mod error;
pub mod factorization;
pub mod model;
pub mod operator;
pub mod quadrature;
mod summation;
pub mod zeros;

pub use domain::{
    BetaEnvelope, ComplexPoint, GrowthEnvelope, RateFunction, SeparationParams,
};
pub use error::{Error, ErrorKind, Result};
pub use model::FunctionModel;
pub use zeros::{ZeroEntry, ZeroSet};

/// Module-wide constant of the small-|z| estimate `|log B(s,z)| <= C |z|^2 / |s|^3`.
pub const SMALL_Z_CONSTANT: f64 = 8.0;

/// Harnack comparison factor for a disk of radius 1/2 evaluated at distance 1/4.
pub const HARNACK_FACTOR: f64 = 1.0 / 3.0;

/// Relative determinant floor: `det` is treated as zero below `DET_FLOOR_REL * (1 + ||A||)`.
pub const DET_FLOOR_REL: f64 = 1e-12;
