//! The dephased Landau–Zener sweep.
//!
//! `H(τ) = ((τ + s)/2) σᶻ + √κ σˣ` with dephasing `λ√κ (σᶻρσᶻ − ρ)`, where
//! `s` is an optional detuning offset (zero for the bare sweep). Density
//! matrices are vectorised as `(ρ₁₁, ρ₁₂, ρ₂₁, ρ₂₂)`.

mod first_order;
mod propagator;
mod trajectories;

pub use first_order::{
    dominance_terms, first_order_integrals, prob_first_order, prob_first_order_window, x_kappa, y_kappa,
    Dominance, FirstOrderIntegrals,
};
pub use propagator::{evolve_interaction, lz_propagator, LzPropagator, Propagator};
pub use trajectories::{noise_trajectory_oracle, MonteCarloEstimate};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::OdeProblem;

pub type Mat2 = [[Complex64; 2]; 2];
pub type Liouvillian = [[Complex64; 4]; 4];

pub const DEFAULT_TAU_I: f64 = -200.0;
pub const DEFAULT_TAU_F: f64 = 200.0;

/// Sweep parameters in dimensionless units (`κ = J²/v`, `λ = W²/J`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LZParams {
    pub kappa: f64,
    pub lambda: f64,
    pub tau_i: f64,
    pub tau_f: f64,
    /// Constant added to `τ` in the diagonal of `H`.
    pub detuning_offset: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl LZParams {
    pub fn new(kappa: f64, lambda: f64) -> Self {
        Self {
            kappa,
            lambda,
            tau_i: DEFAULT_TAU_I,
            tau_f: DEFAULT_TAU_F,
            detuning_offset: 0.0,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
        }
    }

    pub fn with_window(mut self, tau_i: f64, tau_f: f64) -> Self {
        self.tau_i = tau_i;
        self.tau_f = tau_f;
        self
    }

    pub fn with_offset(mut self, s: f64) -> Self {
        self.detuning_offset = s;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0) || !self.kappa.is_finite() {
            return Err(Error::InvalidParameter(format!("kappa = {} must be finite and ≥ 0", self.kappa)));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("lambda = {} must be finite and ≥ 0", self.lambda)));
        }
        if !(self.tau_i < self.tau_f) {
            return Err(Error::InvalidParameter(format!("window [{}, {}] is empty", self.tau_i, self.tau_f)));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// Dephasing rate of the coherences, `2λ√κ`.
    pub fn dephasing_rate(&self) -> f64 {
        2.0 * self.lambda * self.kappa.sqrt()
    }
}

/// A 2×2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    pub r11: Complex64,
    pub r12: Complex64,
    pub r21: Complex64,
    pub r22: Complex64,
}

impl DensityMatrix2 {
    /// `|↑⟩⟨↑|`, the initial ground state of the sweep.
    pub fn up() -> Self {
        Self::diagonal(1.0, 0.0)
    }

    pub fn down() -> Self {
        Self::diagonal(0.0, 1.0)
    }

    pub fn diagonal(p_up: f64, p_down: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self { r11: Complex64::new(p_up, 0.0), r12: z, r21: z, r22: Complex64::new(p_down, 0.0) }
    }

    pub fn from_vec(v: &[Complex64]) -> Self {
        Self { r11: v[0], r12: v[1], r21: v[2], r22: v[3] }
    }

    pub fn to_vec(&self) -> [Complex64; 4] {
        [self.r11, self.r12, self.r21, self.r22]
    }

    pub fn from_mat(m: &Mat2) -> Self {
        Self { r11: m[0][0], r12: m[0][1], r21: m[1][0], r22: m[1][1] }
    }

    pub fn to_mat(&self) -> Mat2 {
        [[self.r11, self.r12], [self.r21, self.r22]]
    }

    /// Population of `|↑⟩`, the transition probability.
    pub fn p_up(&self) -> f64 {
        self.r11.re
    }

    pub fn trace(&self) -> Complex64 {
        self.r11 + self.r22
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.r11.re;
        let d = self.r22.re;
        let off = 0.5 * (self.r12 + self.r21.conj());
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d).powi(2) + off.norm_sqr()).sqrt();
        [mean - rad, mean + rad]
    }

    pub fn validate(&self) -> Result<()> {
        if (self.r21 - self.r12.conj()).norm() > 1e-10 || self.r11.im.abs() > 1e-10 || self.r22.im.abs() > 1e-10 {
            return Err(Error::InvalidParameter("density matrix is not Hermitian".into()));
        }
        if (self.trace() - 1.0).norm() > 1e-9 {
            return Err(Error::InvalidParameter(format!("trace {} differs from 1", self.trace())));
        }
        if self.eigenvalues()[0] < -1e-8 {
            return Err(Error::InvalidParameter("density matrix has a negative eigenvalue".into()));
        }
        Ok(())
    }
}

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub(crate) fn dagger(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// The 4×4 generator at time `τ`.
pub fn liouvillian(params: &LZParams, tau: f64) -> Liouvillian {
    let i = Complex64::i();
    let z = Complex64::new(0.0, 0.0);
    let c = params.kappa.sqrt();
    let big_gamma = params.dephasing_rate();
    let t = tau + params.detuning_offset;
    [
        [z, i * c, -i * c, z],
        [i * c, -i * t - big_gamma, z, -i * c],
        [-i * c, z, i * t - big_gamma, i * c],
        [z, -i * c, i * c, z],
    ]
}

/// Bloch vector `(x, y, z)` with `ρ = (tr·I + xσx + yσy + zσz)/2`.
fn to_bloch(rho: &DensityMatrix2) -> [f64; 3] {
    [2.0 * rho.r12.re, -2.0 * rho.r12.im, (rho.r11 - rho.r22).re]
}

fn from_bloch(r: &[f64], trace: f64) -> DensityMatrix2 {
    let r12 = Complex64::new(0.5 * r[0], -0.5 * r[1]);
    DensityMatrix2 {
        r11: Complex64::new(0.5 * (trace + r[2]), 0.0),
        r12,
        r21: r12.conj(),
        r22: Complex64::new(0.5 * (trace - r[2]), 0.0),
    }
}

/// Master equation on the real Bloch vector; same dynamics as [`liouvillian`].
fn bloch_rhs(params: LZParams) -> impl Fn(f64, &[f64], &mut [f64]) + Copy {
    let a = 2.0 * params.kappa.sqrt();
    let big_gamma = params.dephasing_rate();
    let s = params.detuning_offset;
    move |tau, r, dr| {
        let t = tau + s;
        dr[0] = -t * r[1] - big_gamma * r[0];
        dr[1] = t * r[0] - a * r[2] - big_gamma * r[1];
        dr[2] = a * r[1];
    }
}

/// `ρ(τ_f)` from the master equation in the Schrödinger picture.
pub fn evolve_master(params: &LZParams, rho0: &DensityMatrix2) -> Result<DensityMatrix2> {
    params.validate()?;
    rho0.validate()?;
    let sol = OdeProblem::new(bloch_rhs(*params), params.tau_i, params.tau_f, to_bloch(rho0).to_vec())
        .tolerances(params.rel_tol, params.abs_tol)
        .solve()?;
    Ok(from_bloch(&sol.y, rho0.trace().re))
}

/// `ρ(τ)` at each of `times` (ascending, inside the window).
pub fn evolve_master_sampled(params: &LZParams, rho0: &DensityMatrix2, times: &[f64]) -> Result<Vec<DensityMatrix2>> {
    params.validate()?;
    rho0.validate()?;
    let sol = OdeProblem::new(bloch_rhs(*params), params.tau_i, params.tau_f, to_bloch(rho0).to_vec())
        .tolerances(params.rel_tol, params.abs_tol)
        .samples(times.to_vec())
        .solve()?;
    let trace = rho0.trace().re;
    Ok(sol.samples.iter().map(|v| from_bloch(v, trace)).collect())
}

/// Transition probability `ρ₁₁(τ_f)` from `|↑⟩⟨↑|` by the master equation.
pub fn prob_numeric(params: &LZParams) -> Result<f64> {
    Ok(evolve_master(params, &DensityMatrix2::up())?.p_up())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    /// `e^{−2πκ}`
    NonAdiabatic,
    /// `½(1 − e^{−4πλκ})`
    Adiabatic,
    /// Sum of the two.
    Combined,
    /// `½(1 − e^{−4πκ})`, the strong-noise limit.
    Kayanuma,
}

/// Closed-form transition probabilities.
pub fn p_closed(kind: ClosedForm, params: &LZParams) -> f64 {
    let k = params.kappa;
    let l = params.lambda;
    let non_ad = (-2.0 * PI * k).exp();
    let ad = -0.5 * (-4.0 * PI * l * k).exp_m1();
    match kind {
        ClosedForm::NonAdiabatic => non_ad,
        ClosedForm::Adiabatic => ad,
        ClosedForm::Combined => non_ad + ad,
        ClosedForm::Kayanuma => -0.5 * (-4.0 * PI * k).exp_m1(),
    }
}
