//! Monte-Carlo average over explicit white-noise realisations.
//!
//! Each trajectory evolves a pure state under
//! `H = ((τ + s)/2 + γ_k)σᶻ + √κσˣ` with `γ_k` constant over a step of width
//! `dt` and drawn from `N(0, λ√κ/dt)`. The step propagator is the exact
//! exponential of the midpoint Hamiltonian.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::LZParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_traj: usize,
}

fn run_trajectory(params: &LZParams, dt: f64, n_steps: usize, seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let sigma = (params.lambda * params.kappa.sqrt() / dt).sqrt();
    let c = params.kappa.sqrt();
    let mut up = Complex64::new(1.0, 0.0);
    let mut down = Complex64::new(0.0, 0.0);
    for k in 0..n_steps {
        let t_mid = params.tau_i + (k as f64 + 0.5) * dt + params.detuning_offset;
        let noise: f64 = if sigma > 0.0 { sigma * rng.sample::<f64, _>(StandardNormal) } else { 0.0 };
        let a = 0.5 * t_mid + noise;
        let w = (a * a + c * c).sqrt();
        let (sn, cs) = (w * dt).sin_cos();
        let (sa, sc) = if w > 0.0 { (sn * a / w, sn * c / w) } else { (0.0, 0.0) };
        // exp(−i(aσᶻ + cσˣ)dt) = cos I − i sin (aσᶻ + cσˣ)/w
        let new_up = Complex64::new(cs, -sa) * up + Complex64::new(0.0, -sc) * down;
        let new_down = Complex64::new(0.0, -sc) * up + Complex64::new(cs, sa) * down;
        up = new_up;
        down = new_down;
    }
    up.norm_sqr()
}

/// Mean and standard error of `|⟨↑|ψ(τ_f)⟩|²` over `n_traj` noise
/// realisations. Trajectory `j` draws from the ChaCha stream `j` of `seed`,
/// so results do not depend on the thread count.
pub fn noise_trajectory_oracle(params: &LZParams, n_traj: usize, dt: f64, seed: u64) -> Result<MonteCarloEstimate> {
    params.validate()?;
    if n_traj < 2 {
        return Err(Error::InvalidParameter("need at least two trajectories".into()));
    }
    if !(dt > 0.0) || params.lambda * params.kappa.sqrt() * dt > 0.01 {
        return Err(Error::InvalidParameter(format!("step dt = {dt} too large for the noise strength")));
    }
    let n_steps = ((params.tau_f - params.tau_i) / dt).round().max(1.0) as usize;
    let dt = (params.tau_f - params.tau_i) / n_steps as f64;
    let probs: Vec<f64> = (0..n_traj as u64)
        .into_par_iter()
        .map(|j| run_trajectory(params, dt, n_steps, seed, j))
        .collect();
    let n = n_traj as f64;
    let mean = probs.iter().sum::<f64>() / n;
    let var = probs.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(MonteCarloEstimate { mean, stderr: (var / n).sqrt(), n_traj })
}
