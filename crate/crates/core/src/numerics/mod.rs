//! Generic numerical kernels: ODE integration, quadrature, scalar minimization.

pub mod interp;
pub mod minimize;
pub mod ode;
pub mod quad;
pub mod scalar;

pub use interp::{quintic_hermite, HermiteTable};
pub use minimize::{minimize_scalar, minimize_scalar_with, Minimum};
pub use ode::{integrate_fixed_step, integrate_ode, OdeProblem, OdeSolution, OdeStats};
pub use quad::{gauss_legendre_composite, quad_adaptive, quad_adaptive_with, Domain, QuadOptions, Quadrature};
pub use scalar::Scalar;
