//! Numerics for orthogonal polynomials on the unit circle.
//!
//! The crate covers the computational side of higher-order Szegő theorems:
//!
//! * [`verblunsky`]: finite Verblunsky coefficient sequences (zero-extended)
//!   with the standard test and power-law families.
//! * [`szego`]: the Szegő recursion on dense monomial coefficients and the
//!   Bernstein–Szegő density `1/|φ_N(e^{iθ})|²`.
//! * [`pruefer`]: log-domain Prüfer variables, oscillatory sums and the
//!   summation-by-parts transform that controls them.
//! * [`quadrature`]: graded, adaptive Gauss–Kronrod integration on the circle
//!   with the singular point `θ = 0` handled by dyadic refinement.
//! * [`sumrule`]: the weighted integral `∫(1−cos θ)^m log w dθ/2π`, its
//!   Fourier weights, exponent fits and the ℓ^{2m+2} trend experiment.
//! * [`inequalities`]: executable forms of the comparison inequalities used to
//!   replace k-fold products by `|α_n|^{2k}`.
//!
//! Everything here is `no_std` (with `alloc`); IO, CLI and randomized suites
//! live in the companion `opuc` crate.
#![no_std]
#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;
#[cfg(test)]
extern crate std;

/// Error type shared by every module.
pub mod error;
pub mod inequalities;
pub mod pruefer;
pub mod quadrature;
pub mod sumrule;
pub mod szego;
pub mod verblunsky;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use verblunsky::VerblunskySequence;
