//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("argument outside supported domain: {0}")]
    Domain(String),

    #[error("accuracy target missed: estimate {estimate:.3e} exceeds tolerance {tol:.3e}")]
    Accuracy { estimate: f64, tol: f64 },

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("maximum step count {0} exceeded")]
    MaxSteps(usize),

    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("quadrature did not converge: error estimate {estimate:.3e}, tolerance {tol:.3e}")]
    QuadratureNonConvergence { estimate: f64, tol: f64 },

    #[error("no interior minimum on [{lo}, {hi}]")]
    NoInteriorMinimum { lo: f64, hi: f64 },

    #[error("degenerate eigenvalues {a} and {b}")]
    Degenerate { a: String, b: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
