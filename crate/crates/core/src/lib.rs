//! Bound states, wave functions and Green's functions of a particle in the
//! q-deformed radial Rosen-Morse potential
//!
//! ```text
//! V_q(r) = -V1 / cosh_q^2(r/a) + V2 tanh_q(r/a),   r >= 0,
//! ```
//!
//! together with an independent finite-difference / shooting eigensolver used
//! to validate the closed forms.

// `!(x < y)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod greens;
pub mod hyperbolic;
pub mod oracle;
pub mod special;
pub mod spectrum;

pub use error::{Error, Result};
pub use hyperbolic::PotentialParams;
pub use num_complex::Complex64;

/// Complex scalar used by the special-function and Green's-function layers.
pub type ComplexValue = Complex64;
