//! Blaschke-based phase unwinding in Hardy spaces.
//!
//! The crate covers both the torus (unit circle) and the real line:
//!
//! - [`special`]: complex Gamma, log-Gamma and sine.
//! - [`torus`]: sampled functions on the circle, Riesz projection,
//!   projection onto invariant subspaces `uH²`, inner–outer factorization.
//! - [`blaschke`]: finite Blaschke products on the disk and upper half-plane.
//! - [`mtbasis`]: Malmquist–Takenaka systems, analysis and synthesis.
//! - [`unwind`]: the phase-unwinding recursion with pluggable strategies.
//! - [`quadrature`]: inner products on `L²(ℝ)` for half-plane functions.
//! - [`multiscale`]: the periodic inner function `G`, the translates of `φ`,
//!   the dyadic inner function `Δ` and the wavelet system `φ_{n,j}`.
//! - [`identities`]: explicit unwinding series for `e^{2iπx}` and related
//!   singular inner functions.

pub mod blaschke;
pub mod error;
mod fft;
pub mod identities;
pub mod mtbasis;
pub mod multiscale;
pub mod quadrature;
pub mod special;
pub mod torus;
pub mod unwind;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// `e^{-2π}`, the ratio that governs every explicit unwinding series.
pub const EXP_NEG_2PI: f64 = 0.001_867_442_731_707_988_8;

/// Shorthand for `Complex64::new`.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);
