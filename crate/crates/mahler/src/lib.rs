//! Numerics for the real Mahler ensemble of random polynomials.
//!
//! Polynomials of degree N with real coefficients, drawn with density
//! proportional to M(b)^{-s} (M the Mahler measure), have roots forming a
//! Pfaffian point process. This crate evaluates the skew-orthogonal family
//! behind that process, the finite-N matrix kernel and its correlation
//! functions, the limiting kernels near and away from the unit circle, the
//! star-body volume identity, and a Markov-chain sampler for checking all of
//! it empirically.

// negated comparisons reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod identities;
pub mod kernel;
pub mod limits;
pub mod mc;
pub mod polys;
pub mod quad;
pub mod specfun;
pub mod validate;
pub mod volume;

pub use error::{Error, Result};
pub use kernel::{EnsembleParams, KernelValue2x2, PointConfig};
pub use limits::LimitKernelSpec;
pub use num_complex::Complex64;
pub use polys::PolyCoeffs;
