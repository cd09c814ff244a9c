//! Special functions: complex gamma, parabolic cylinder functions of the
//! Landau–Zener orders, Bessel/Struve combinations and a confluent
//! hypergeometric family with its error functional.

pub mod bessel;
pub mod gamma;
pub mod hyp1f1;
pub mod pcf;

pub use bessel::{bessel_i0_scaled, bessel_minus_struve};
pub use gamma::{gamma_complex, ln_gamma, rgamma};
pub use hyp1f1::{e_kappa, hyp1f1_half};
pub use pcf::{pcf_asymptotic, pcf_d, pcf_d_with_tol, ComplexOrderPcfArgs, Order, PcfFamily, RayTable, SpecialValue};
