//! Transition probability to first order in the noise strength.
//!
//! With `A(τ) = D_{iκ}(e^{−iπ/4}τ)` and `B(τ) = D_{iκ−1}(e^{−iπ/4}τ)`,
//!
//! ```text
//! X(τ) = κ e^{−πκ/2} B*(τ) B(−τ)
//! Y(τ) = (κ/2) e^{−πκ/2} (|B(τ)|² + |B(−τ)|²)
//! P ≈ e^{−2πκ} + 4λ√κ ∫ (|X|² + α (Re X)² + β Re X · Y) dτ
//! α = 2e^{−2πκ}/(1 − e^{−2πκ}),  β = 2e^{−πκ}/(1 − e^{−2πκ})
//! ```
//!
//! `X(−τ) = X(τ)*`, so the integrands are even. The half-line integrals are
//! cut at `T = max(200, 20√κ)`. Beyond `T`, `|X|² ≈ κ(1 − e^{−2πκ})/τ²` and
//! `(Re X)²` averages to half of that; those smooth tails are added
//! analytically and the oscillating remainders are dropped.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{dagger, mat_mul, propagator::LzPropagator, LZParams, Mat2};
use crate::error::{Error, Result};
use crate::numerics::{quad_adaptive_with, Domain, QuadOptions};
use crate::specfun::PcfFamily;

const KAPPA_FLOOR: f64 = 1e-6;

/// `X_κ(τ)`.
pub fn x_kappa(family: &PcfFamily, tau: f64) -> Complex64 {
    let k = family.kappa();
    let (_, b_pos) = family.ab(tau);
    let (_, b_neg) = family.ab(-tau);
    k * (-PI * k / 2.0).exp() * b_pos.conj() * b_neg
}

/// `Y_κ(τ)`.
pub fn y_kappa(family: &PcfFamily, tau: f64) -> f64 {
    let k = family.kappa();
    let (_, b_pos) = family.ab(tau);
    let (_, b_neg) = family.ab(-tau);
    0.5 * k * (-PI * k / 2.0).exp() * (b_pos.norm_sqr() + b_neg.norm_sqr())
}

/// Whole-line integrals of the three first-order integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderIntegrals {
    pub kappa: f64,
    /// `∫ |X|²`
    pub abs_x2: f64,
    /// `∫ (Re X)²`
    pub re_x2: f64,
    /// `∫ Re X · Y`
    pub re_x_y: f64,
    /// Quadrature error plus a bound on the neglected oscillating tails.
    pub error: f64,
    pub cutoff: f64,
}

impl FirstOrderIntegrals {
    fn alpha_beta(&self) -> (f64, f64) {
        let k = self.kappa;
        let denom = -(-2.0 * PI * k).exp_m1();
        (2.0 * (-2.0 * PI * k).exp() / denom, 2.0 * (-PI * k).exp() / denom)
    }

    /// The bracket `∫(|X|² + α(Re X)² + β Re X·Y)`.
    pub fn combined(&self) -> f64 {
        let (a, b) = self.alpha_beta();
        self.abs_x2 + a * self.re_x2 + b * self.re_x_y
    }
}

pub fn first_order_integrals(family: &PcfFamily, tol: f64) -> Result<FirstOrderIntegrals> {
    let kappa = family.kappa();
    if kappa < KAPPA_FLOOR {
        return Err(Error::Domain(format!("kappa = {kappa} too small for the first-order integrals")));
    }
    let cutoff = 200f64.max(20.0 * kappa.sqrt());
    let opts = QuadOptions { abs_tol: tol, rel_tol: 0.0, max_intervals: 50_000 };
    let dom = Domain::Finite { a: 0.0, b: cutoff };
    let pref = kappa * (-PI * kappa / 2.0).exp();
    let xy = |t: f64| {
        let (_, bp) = family.ab(t);
        let (_, bn) = family.ab(-t);
        let x = pref * bp.conj() * bn;
        let y = 0.5 * pref * (bp.norm_sqr() + bn.norm_sqr());
        (x, y)
    };
    // |X|² in the real part, (Re X)² in the imaginary part.
    let q1 = quad_adaptive_with(
        |t: f64| {
            let (x, _) = xy(t);
            Complex64::new(x.norm_sqr(), x.re * x.re)
        },
        dom,
        opts,
    )?;
    let q2 = quad_adaptive_with(|t: f64| {
        let (x, y) = xy(t);
        x.re * y
    }, dom, opts)?;
    let smooth_tail = kappa * -(-2.0 * PI * kappa).exp_m1() / cutoff;
    let abs_x2 = 2.0 * (q1.value.re + smooth_tail);
    let re_x2 = 2.0 * (q1.value.im + 0.5 * smooth_tail);
    let re_x_y = 2.0 * q2.value;
    // Oscillating tails integrate to O(κ/T²); smooth-tail corrections to O(κ²/T³).
    let tail_err = 2.0 * (kappa / (cutoff * cutoff) + kappa * kappa / cutoff.powi(3));
    Ok(FirstOrderIntegrals {
        kappa,
        abs_x2,
        re_x2,
        re_x_y,
        error: 2.0 * (q1.error + q2.error) + tail_err,
        cutoff,
    })
}

/// First-order transition probability in the infinite-window limit.
pub fn prob_first_order(params: &LZParams) -> Result<f64> {
    params.validate()?;
    if params.kappa < KAPPA_FLOOR {
        return Ok((-2.0 * PI * params.kappa).exp());
    }
    if params.lambda == 0.0 {
        return Ok((-2.0 * PI * params.kappa).exp());
    }
    let family = PcfFamily::new(params.kappa)?;
    let ints = first_order_integrals(&family, 1e-10)?;
    Ok((-2.0 * PI * params.kappa).exp() + 4.0 * params.lambda * params.kappa.sqrt() * ints.combined())
}

/// First-order transition probability over the finite window of `params`:
/// `|f(τ_f)|² + λ√κ ∫ ⟨↑|U_f (σ̃ρ₀σ̃ − ρ₀) U_f†|↑⟩ dτ'` with `ρ₀ = |↑⟩⟨↑|`.
pub fn prob_first_order_window(params: &LZParams) -> Result<f64> {
    params.validate()?;
    let prop = LzPropagator::with_offset(params.kappa, params.tau_i, params.detuning_offset)?;
    let u_f = prop.at(params.tau_f).matrix();
    let p0 = u_f[0][0].norm_sqr();
    let gamma = params.lambda * params.kappa.sqrt();
    if gamma == 0.0 {
        return Ok(p0);
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let rho0: Mat2 = [[one, zero], [zero, zero]];
    let u_f_dag = dagger(&u_f);
    let integrand = |t: f64| {
        let s = prop.sigma_z_tilde(t);
        let mut m = mat_mul(&mat_mul(&s, &rho0), &s);
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e -= rho0[i][j];
            }
        }
        mat_mul(&mat_mul(&u_f, &m), &u_f_dag)[0][0].re
    };
    let q = quad_adaptive_with(
        integrand,
        Domain::Finite { a: params.tau_i, b: params.tau_f },
        QuadOptions { abs_tol: 1e-10, rel_tol: 0.0, max_intervals: 50_000 },
    )?;
    Ok(p0 + gamma * q.value)
}

/// Sizes of the three first-order terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dominance {
    /// `(b₁ + b₂ + b₃)/√κ`, so that the first-order correction is `λ√κ Z`.
    pub z: f64,
    /// `4√κ ∫|X|²`
    pub b1: f64,
    /// `4√κ α ∫(Re X)²`
    pub b2: f64,
    /// `4√κ β ∫Re X·Y`
    pub b3: f64,
}

pub fn dominance_terms(kappa: f64) -> Result<Dominance> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("kappa = {kappa} must be positive")));
    }
    let family = PcfFamily::new(kappa)?;
    let ints = first_order_integrals(&family, 1e-10)?;
    let (a, b) = ints.alpha_beta();
    let s = 4.0 * kappa.sqrt();
    let b1 = s * ints.abs_x2;
    let b2 = s * a * ints.re_x2;
    let b3 = s * b * ints.re_x_y;
    Ok(Dominance { z: (b1 + b2 + b3) / kappa.sqrt(), b1, b2, b3 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_is_hermitian_in_time() {
        let fam = PcfFamily::new(1.3).unwrap();
        for &t in &[0.4, 3.0, 27.0] {
            assert!((x_kappa(&fam, -t) - x_kappa(&fam, t).conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn tail_of_abs_x2() {
        let fam = PcfFamily::new(2.0).unwrap();
        let t: f64 = 150.0;
        let scaled = t * t * x_kappa(&fam, t).norm_sqr();
        let expect = 2.0 * -(-4.0 * PI).exp_m1();
        assert!((scaled - expect).abs() < 5e-3 * expect, "{scaled} vs {expect}");
    }

    #[test]
    fn noiseless_first_order_is_lz() {
        let p = LZParams::new(0.4, 0.0);
        assert_eq!(prob_first_order(&p).unwrap(), (-0.8 * PI).exp());
    }

    #[test]
    fn tiny_kappa_returns_non_adiabatic() {
        let p = LZParams::new(1e-8, 1e-3);
        assert!((prob_first_order(&p).unwrap() - 1.0).abs() < 1e-6);
    }
}
