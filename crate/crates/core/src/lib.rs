//! Noise-averaged Landau–Zener and transverse-field Ising dynamics.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] evaluates the special functions (complex gamma, parabolic
//!   cylinder functions of order `±iκ`, `±iκ−1`, Bessel/Struve combinations and
//!   a confluent hypergeometric family).
//! * [`numerics`] provides an adaptive Dormand–Prince integrator, adaptive
//!   Gauss–Kronrod quadrature and a bracketed scalar minimizer.
//! * [`lz`] implements the dephased two-level sweep: Liouvillian, master
//!   equation, exact propagator, first-order formula and closed forms.
//! * [`adiabatic`] holds the Liouvillian spectrum and adiabatic propagation.
//! * [`ising`] maps the transverse-field Ising chain onto independent modes.
//! * [`optimize`] finds the defect-minimizing sweep rate.

pub mod adiabatic;
pub mod error;
pub mod ising;
pub mod lz;
pub mod numerics;
pub mod optimize;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
