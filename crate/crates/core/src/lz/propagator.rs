//! Exact noiseless propagator `U = [[f, −g*], [g, f*]]` and the
//! interaction-picture master equation built on it.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::{dagger, mat_mul, DensityMatrix2, LZParams, Mat2};
use crate::error::{Error, Result};
use crate::numerics::OdeProblem;
use crate::specfun::PcfFamily;

/// The amplitudes `(f, g)` of `U(τ, τ_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub f: Complex64,
    pub g: Complex64,
    pub kappa: f64,
    pub tau: f64,
    pub tau_i: f64,
}

impl Propagator {
    pub fn matrix(&self) -> Mat2 {
        [[self.f, -self.g.conj()], [self.g, self.f.conj()]]
    }

    /// `|f|² + |g|² − 1`.
    pub fn unitarity_defect(&self) -> f64 {
        self.f.norm_sqr() + self.g.norm_sqr() - 1.0
    }

    /// `U† σᶻ U`.
    pub fn sigma_z_tilde(&self) -> Mat2 {
        sigma_z_tilde(self.f, self.g)
    }
}

fn sigma_z_tilde(f: Complex64, g: Complex64) -> Mat2 {
    let d = f.norm_sqr() - g.norm_sqr();
    let off = -2.0 * f.conj() * g.conj();
    [[Complex64::new(d, 0.0), off], [off.conj(), Complex64::new(-d, 0.0)]]
}

/// Propagator from a fixed initial time, reusable across many `τ`.
#[derive(Debug, Clone)]
pub struct LzPropagator {
    family: PcfFamily,
    kappa: f64,
    tau_i: f64,
    offset: f64,
    a_i: Complex64,
    b_i: Complex64,
    pref: f64,
    pref_g: Complex64,
}

impl LzPropagator {
    pub fn new(kappa: f64, tau_i: f64) -> Result<Self> {
        Self::with_offset(kappa, tau_i, 0.0)
    }

    /// Propagator of `H = ((τ + s)/2)σᶻ + √κσˣ`.
    pub fn with_offset(kappa: f64, tau_i: f64, offset: f64) -> Result<Self> {
        let family = PcfFamily::new(kappa)?;
        Ok(Self::from_family(family, tau_i, offset))
    }

    pub fn from_family(family: PcfFamily, tau_i: f64, offset: f64) -> Self {
        let kappa = family.kappa();
        let (a_i, b_i) = family.ab(tau_i + offset);
        let pref = (-PI * kappa / 2.0).exp();
        let pref_g = pref * kappa.sqrt() * Complex64::from_polar(1.0, FRAC_PI_4);
        Self { family, kappa, tau_i, offset, a_i, b_i, pref, pref_g }
    }

    pub fn family(&self) -> &PcfFamily {
        &self.family
    }

    /// `(f, g)` at `τ`.
    pub fn fg(&self, tau: f64) -> (Complex64, Complex64) {
        let (a, b) = self.family.ab(tau + self.offset);
        let f = self.pref * (self.a_i * a.conj() + self.kappa * self.b_i.conj() * b);
        let g = self.pref_g * (self.a_i * b.conj() - self.b_i.conj() * a);
        (f, g)
    }

    pub fn at(&self, tau: f64) -> Propagator {
        let (f, g) = self.fg(tau);
        Propagator { f, g, kappa: self.kappa, tau, tau_i: self.tau_i }
    }

    pub fn sigma_z_tilde(&self, tau: f64) -> Mat2 {
        let (f, g) = self.fg(tau);
        sigma_z_tilde(f, g)
    }
}

/// `U(τ, τ_i)` for the bare sweep.
pub fn lz_propagator(kappa: f64, tau: f64, tau_i: f64) -> Result<Propagator> {
    Ok(LzPropagator::new(kappa, tau_i)?.at(tau))
}

/// `ρ(τ_f)` by integrating the interaction-picture equation
/// `dρ̃/dτ = λ√κ(σ̃ᶻρ̃σ̃ᶻ − ρ̃)` and mapping back with `U(τ_f, τ_i)`.
pub fn evolve_interaction(params: &LZParams, rho0: &DensityMatrix2) -> Result<DensityMatrix2> {
    params.validate()?;
    rho0.validate()?;
    let prop = LzPropagator::with_offset(params.kappa, params.tau_i, params.detuning_offset)?;
    evolve_interaction_with(params, rho0, &prop)
}

/// As [`evolve_interaction`] with a prebuilt propagator for the same
/// `κ`, `τ_i` and offset.
pub fn evolve_interaction_with(params: &LZParams, rho0: &DensityMatrix2, prop: &LzPropagator) -> Result<DensityMatrix2> {
    if prop.kappa != params.kappa || prop.tau_i != params.tau_i || prop.offset != params.detuning_offset {
        return Err(Error::InvalidParameter("propagator does not match parameters".into()));
    }
    let u_f = prop.at(params.tau_f).matrix();
    let gamma = params.lambda * params.kappa.sqrt();
    let rho_tilde = if gamma == 0.0 {
        rho0.to_mat()
    } else {
        let rhs = |tau: f64, y: &[Complex64], dy: &mut [Complex64]| {
            let s = prop.sigma_z_tilde(tau);
            let r = [[y[0], y[1]], [y[2], y[3]]];
            let srs = mat_mul(&mat_mul(&s, &r), &s);
            dy[0] = gamma * (srs[0][0] - r[0][0]);
            dy[1] = gamma * (srs[0][1] - r[0][1]);
            dy[2] = gamma * (srs[1][0] - r[1][0]);
            dy[3] = gamma * (srs[1][1] - r[1][1]);
        };
        let sol = OdeProblem::new(rhs, params.tau_i, params.tau_f, rho0.to_vec().to_vec())
            .tolerances(params.rel_tol, params.abs_tol)
            .solve()?;
        [[sol.y[0], sol.y[1]], [sol.y[2], sol.y[3]]]
    };
    let rho = mat_mul(&mat_mul(&u_f, &rho_tilde), &dagger(&u_f));
    Ok(DensityMatrix2::from_mat(&rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lz::evolve_master;

    #[test]
    fn identity_at_initial_time() {
        let p = lz_propagator(2.0, -30.0, -30.0).unwrap();
        assert!((p.f - 1.0).norm() < 1e-9);
        assert!(p.g.norm() < 1e-9);
    }

    #[test]
    fn no_coupling_keeps_modulus() {
        let u = LzPropagator::new(0.0, -50.0).unwrap();
        for &t in &[-20.0, 0.0, 13.0, 50.0] {
            assert!((u.at(t).f.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn matches_schrodinger_integration() {
        let (kappa, tau_i, tau_f): (f64, f64, f64) = (0.8, -25.0, 30.0);
        let c = kappa.sqrt();
        let rhs = move |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
            let i = Complex64::i();
            dy[0] = -i * (0.5 * t * y[0] + c * y[1]);
            dy[1] = -i * (c * y[0] - 0.5 * t * y[1]);
        };
        let psi = OdeProblem::new(rhs, tau_i, tau_f, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .tolerances(1e-12, 1e-14)
            .solve()
            .unwrap()
            .y;
        let p = lz_propagator(kappa, tau_f, tau_i).unwrap();
        assert!((p.f - psi[0]).norm() < 1e-8, "{} vs {}", p.f, psi[0]);
        assert!((p.g - psi[1]).norm() < 1e-8, "{} vs {}", p.g, psi[1]);
    }

    #[test]
    fn pictures_agree_with_offset() {
        let params = LZParams::new(1.5, 0.02).with_window(-40.0, 40.0).with_offset(0.9);
        let a = evolve_master(&params, &DensityMatrix2::up()).unwrap();
        let b = evolve_interaction(&params, &DensityMatrix2::up()).unwrap();
        assert!((a.p_up() - b.p_up()).abs() < 1e-8);
        assert!((a.r12 - b.r12).norm() < 1e-8);
    }
}
