//! Exact moments of random quantum channel outputs.
//!
//! The crate evaluates finite-dimensional moments through symmetric-group
//! and Weingarten sums, the matching large-dimension predictions, and a
//! Monte Carlo oracle built on Haar-random isometries.
//!
//! Every combinatorial routine is generic over [`Scalar`], implemented for
//! `f32`, `f64` and the exact [`Rational`].

pub mod error;
pub mod freeprob;
pub mod moments;
pub mod montecarlo;
pub mod numeric;
pub mod predictions;
pub mod scalar;
pub mod symgroup;
pub mod weingarten;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision rational, the exact scalar.
pub type Rational = num_rational::BigRational;
pub type ExactClassFunction = symgroup::ClassFunction<Rational>;
pub type FloatClassFunction = symgroup::ClassFunction<f64>;
