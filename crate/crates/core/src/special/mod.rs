//! Special functions needed by the closed-form Green's function and the
//! quantization condition.

mod gamma;
mod hyp2f1;

pub use gamma::{digamma, gamma, log_gamma, nonpositive_integer, recip_gamma};
pub use hyp2f1::{hyp2f1, hyp2f1_real, DEGENERACY_BAND, MAX_TERMS};
