//! Transverse-field Ising chain swept through its critical point under a
//! global white-noise field.
//!
//! After the Jordan–Wigner transformation the even-parity sector splits into
//! independent two-level systems labelled by `q = (2n − 1)π/N`. Mode `q` is a
//! Landau–Zener problem with coupling `√κ_q = √κ sin q` and the dephasing
//! strength `λ√κ` of the original chain, which in Landau–Zener units is
//! `λ_eff = λ/|sin q|` on `κ_q`.

mod chain;

pub use chain::{full_chain_oracle, ChainResult, MAX_CHAIN_SPINS};

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lz::{self, LZParams, DEFAULT_TAU_F, DEFAULT_TAU_I};
use crate::numerics::{quad_adaptive, Domain};
use crate::specfun::{bessel_i0_scaled, bessel_minus_struve};

pub const DEFAULT_N_SPINS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingParams {
    pub kappa: f64,
    pub lambda: f64,
    pub n_spins: usize,
    pub tau_i: f64,
    pub tau_f: f64,
    /// Keep the mode detuning shift `2√κ cos q`, which only moves the
    /// crossing time of each mode. Off by default.
    pub include_shift: bool,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl IsingParams {
    pub fn new(kappa: f64, lambda: f64) -> Self {
        Self {
            kappa,
            lambda,
            n_spins: DEFAULT_N_SPINS,
            tau_i: DEFAULT_TAU_I,
            tau_f: DEFAULT_TAU_F,
            include_shift: false,
            rel_tol: 1e-9,
            abs_tol: 1e-10,
        }
    }

    pub fn with_spins(mut self, n: usize) -> Self {
        self.n_spins = n;
        self
    }

    pub fn with_window(mut self, tau_i: f64, tau_f: f64) -> Self {
        self.tau_i = tau_i;
        self.tau_f = tau_f;
        self
    }

    pub fn with_shift(mut self, on: bool) -> Self {
        self.include_shift = on;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!("kappa = {} must be finite and > 0", self.kappa)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda = {} must be finite and ≥ 0", self.lambda)));
        }
        if self.n_spins < 2 || self.n_spins % 2 != 0 {
            return Err(Error::InvalidParameter(format!("n_spins = {} must be even and ≥ 2", self.n_spins)));
        }
        if !(self.tau_i < self.tau_f) {
            return Err(Error::InvalidParameter(format!("window [{}, {}] is empty", self.tau_i, self.tau_f)));
        }
        Ok(())
    }

    /// Landau–Zener parameters of mode `q`.
    pub fn mode_params(&self, q: f64) -> Result<LZParams> {
        if !(q > 0.0 && q < PI) {
            return Err(Error::Domain(format!("mode q = {q} outside (0, π)")));
        }
        let s = q.sin();
        let offset = if self.include_shift { 2.0 * self.kappa.sqrt() * q.cos() } else { 0.0 };
        Ok(LZParams::new(self.kappa * s * s, self.lambda / s)
            .with_window(self.tau_i, self.tau_f)
            .with_offset(offset)
            .with_tolerances(self.rel_tol, self.abs_tol))
    }
}

/// Positive momenta `q_n = (2n − 1)π/N`, `n = 1..N/2`.
pub fn mode_grid(n_spins: usize) -> Result<Vec<f64>> {
    if n_spins < 2 || n_spins % 2 != 0 {
        return Err(Error::InvalidParameter(format!("n_spins = {n_spins} must be even and ≥ 2")));
    }
    let n = n_spins as f64;
    Ok((1..=n_spins / 2).map(|k| (2 * k - 1) as f64 * PI / n).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeMethod {
    /// Master equation for the mode.
    Numeric,
    /// `e^{−2πκ sin²q} + ½(1 − e^{−4πλκ|sin q|})`.
    Closed,
}

/// Non-adiabatic part of the closed mode probability.
pub fn mode_closed_non_adiabatic(kappa: f64, q: f64) -> f64 {
    let s = q.sin();
    (-2.0 * PI * kappa * s * s).exp()
}

/// Adiabatic (noise) part of the closed mode probability.
pub fn mode_closed_adiabatic(kappa: f64, lambda: f64, q: f64) -> f64 {
    -0.5 * (-4.0 * PI * lambda * kappa * q.sin().abs()).exp_m1()
}

/// Probability that mode `q` ends in the state it started in.
pub fn mode_transition(params: &IsingParams, q: f64, method: ModeMethod) -> Result<f64> {
    params.validate()?;
    if !(q > 0.0 && q < PI) {
        return Err(Error::Domain(format!("mode q = {q} outside (0, π)")));
    }
    match method {
        ModeMethod::Numeric => lz::prob_numeric(&params.mode_params(q)?),
        ModeMethod::Closed => Ok(mode_closed_non_adiabatic(params.kappa, q)
            + mode_closed_adiabatic(params.kappa, params.lambda, q)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DefectMethod {
    /// `(2/N) Σ_q P_q` with each `P_q` from the mode master equation.
    NumericSum,
    /// `∫₀^π (dq/π) P_q` of the closed mode probability.
    ThermoIntegral,
}

/// Per-mode probabilities and the resulting defect density.
///
/// For [`DefectMethod::NumericSum`], `defect_density = (2/N) Σ probabilities`.
/// For [`DefectMethod::ThermoIntegral`] the probabilities are the closed
/// integrand sampled on the mode grid and `defect_density` is the integral.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum {
    pub q: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub defect_density: f64,
}

/// Defect density at `τ_f`. Modes are integrated in parallel on the current
/// rayon pool and summed in mode order, so the result does not depend on the
/// number of threads.
pub fn defect_density(params: &IsingParams, method: DefectMethod) -> Result<ModeSpectrum> {
    params.validate()?;
    let q = mode_grid(params.n_spins)?;
    match method {
        DefectMethod::NumericSum => {
            let probs: Vec<f64> = q
                .par_iter()
                .map(|&qq| mode_transition(params, qq, ModeMethod::Numeric))
                .collect::<Result<Vec<f64>>>()?;
            let sum: f64 = probs.iter().sum();
            let defect_density = 2.0 * sum / params.n_spins as f64;
            Ok(ModeSpectrum { q, probabilities: probs, defect_density })
        }
        DefectMethod::ThermoIntegral => {
            let probs = q
                .iter()
                .map(|&qq| mode_transition(params, qq, ModeMethod::Closed))
                .collect::<Result<Vec<f64>>>()?;
            let defect_density = thermo_integral(params.kappa, params.lambda)?;
            Ok(ModeSpectrum { q, probabilities: probs, defect_density })
        }
    }
}

/// `∫₀^π (dq/π) [e^{−2πκ sin²q} + ½(1 − e^{−4πλκ|sin q|})]`.
pub fn thermo_integral(kappa: f64, lambda: f64) -> Result<f64> {
    // The integrand is symmetric about π/2.
    let f = |q: f64| mode_closed_non_adiabatic(kappa, q) + mode_closed_adiabatic(kappa, lambda, q);
    let r = quad_adaptive(f, Domain::Finite { a: 0.0, b: PI / 2.0 }, 1e-13)?;
    Ok(2.0 * r.value / PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DefectClosed {
    /// `e^{−πκ} I₀(πκ)`.
    Kzm,
    /// `1/(π√(2κ))`.
    KzmAsymptotic,
    /// `½ − ½(I₀ − L₀)(4πλκ)`.
    Noise,
    /// `1/(π√(2κ)) + ½ − ½(I₀ − L₀)(4πλκ)`.
    InfOrder,
    /// `1/(π√(2κ)) + 4λκ`.
    FirstOrder,
    /// `1/(π√(2κ)) + 4λκ − 2π²λ²κ²`.
    SecondOrder,
    /// `½ − 1/(4π√κ)`.
    Kayanuma,
    /// `1/(π√(2κ)) + ½ − 1/(4π²λκ)`.
    Reciprocal,
}

impl DefectClosed {
    pub const ALL: [DefectClosed; 8] = [
        DefectClosed::Kzm,
        DefectClosed::KzmAsymptotic,
        DefectClosed::Noise,
        DefectClosed::InfOrder,
        DefectClosed::FirstOrder,
        DefectClosed::SecondOrder,
        DefectClosed::Kayanuma,
        DefectClosed::Reciprocal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DefectClosed::Kzm => "kzm",
            DefectClosed::KzmAsymptotic => "kzm_asymptotic",
            DefectClosed::Noise => "noise",
            DefectClosed::InfOrder => "inf_order",
            DefectClosed::FirstOrder => "first_order",
            DefectClosed::SecondOrder => "second_order",
            DefectClosed::Kayanuma => "kayanuma",
            DefectClosed::Reciprocal => "reciprocal",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Closed-form defect densities.
pub fn defect_closed(kind: DefectClosed, kappa: f64, lambda: f64) -> Result<f64> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("kappa = {kappa} must be finite and > 0")));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda = {lambda} must be finite and ≥ 0")));
    }
    let kzm_asym = 1.0 / (PI * (2.0 * kappa).sqrt());
    let x = 4.0 * PI * lambda * kappa;
    let noise = || if x == 0.0 { 0.0 } else { 0.5 * (1.0 - bessel_minus_struve(x)) };
    let first = kzm_asym + 4.0 * lambda * kappa;
    Ok(match kind {
        DefectClosed::Kzm => bessel_i0_scaled(PI * kappa),
        DefectClosed::KzmAsymptotic => kzm_asym,
        DefectClosed::Noise => noise(),
        DefectClosed::InfOrder => kzm_asym + noise(),
        DefectClosed::FirstOrder => first,
        DefectClosed::SecondOrder => first - 2.0 * PI * PI * lambda * lambda * kappa * kappa,
        DefectClosed::Kayanuma => 0.5 - 1.0 / (4.0 * PI * kappa.sqrt()),
        DefectClosed::Reciprocal => {
            if lambda == 0.0 {
                return Err(Error::Domain("reciprocal form needs lambda > 0".into()));
            }
            kzm_asym + 0.5 - 1.0 / (4.0 * PI * PI * lambda * kappa)
        }
    })
}
