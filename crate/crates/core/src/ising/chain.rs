//! Brute-force master equation for a short periodic chain.
//!
//! In units of `τ = √v t` the averaged dynamics is
//!
//! `dρ/dτ = −i[H, ρ] − (λ√κ/2)[A, [A, ρ]]`,
//! `H = −½ Σ_j [(τ/2)σᶻ_j + √κ σˣ_j σˣ_{j+1}]`, `A = ½ Σ_j σᶻ_j`,
//!
//! started from all spins down. Only the even sector (even number of up
//! spins) is reachable and it is the only one stored.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::OdeProblem;

use super::IsingParams;

pub const MAX_CHAIN_SPINS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainResult {
    /// `⟨𝒩⟩/N` at `τ_f`, with `𝒩 = ½ Σ_j (1 − σᶻ_j)`.
    pub defect_density: f64,
    /// `1 − Tr ρ` at `τ_f`.
    pub trace_defect: f64,
}

struct Sector {
    /// Number of up spins of each basis state.
    ups: Vec<u32>,
    /// Pairs `(row, col)` joined by one `σˣσˣ` bond, with multiplicity.
    bonds: Vec<(usize, usize)>,
}

fn even_sector(n: usize) -> Sector {
    let states: Vec<u32> = (0u32..(1 << n)).filter(|b| b.count_ones() % 2 == 0).collect();
    let mut index = vec![usize::MAX; 1 << n];
    for (i, &b) in states.iter().enumerate() {
        index[b as usize] = i;
    }
    let mut bonds = Vec::new();
    for (i, &b) in states.iter().enumerate() {
        for j in 0..n {
            let flip = (1u32 << j) | (1u32 << ((j + 1) % n));
            bonds.push((index[(b ^ flip) as usize], i));
        }
    }
    Sector { ups: states.iter().map(|b| b.count_ones()).collect(), bonds }
}

/// Defect density of the full `N`-spin chain, `N ∈ {2, 4, 6}`.
///
/// Uses the window and tolerances of `params`; `include_shift` is ignored
/// since the chain contains it automatically.
pub fn full_chain_oracle(params: &IsingParams) -> Result<ChainResult> {
    params.validate()?;
    let n = params.n_spins;
    if n > MAX_CHAIN_SPINS {
        return Err(Error::InvalidParameter(format!("full chain limited to {MAX_CHAIN_SPINS} spins, got {n}")));
    }
    let sec = even_sector(n);
    let dim = sec.ups.len();
    let nf = n as f64;
    let c = params.kappa.sqrt();
    let hop = -0.5 * c;
    let deph = 0.5 * params.lambda * c;
    // Diagonal field per unit τ and noise operator eigenvalues.
    let field: Vec<f64> = sec.ups.iter().map(|&u| -0.25 * (2.0 * u as f64 - nf)).collect();
    let a: Vec<f64> = sec.ups.iter().map(|&u| 0.5 * (2.0 * u as f64 - nf)).collect();
    let damping: Vec<f64> = (0..dim * dim)
        .map(|k| {
            let d = a[k / dim] - a[k % dim];
            deph * d * d
        })
        .collect();

    let rhs = |tau: f64, r: &[C64], dr: &mut [C64]| {
        let mi = C64::new(0.0, -1.0);
        for m in 0..dim {
            for k in 0..dim {
                let idx = m * dim + k;
                let diag = tau * (field[m] - field[k]);
                dr[idx] = mi * diag * r[idx] - damping[idx] * r[idx];
            }
        }
        // −i(Kρ − ρK) with K the symmetric bond matrix.
        for &(p, s) in &sec.bonds {
            for k in 0..dim {
                dr[p * dim + k] += mi * hop * r[s * dim + k];
                dr[k * dim + s] -= mi * hop * r[k * dim + p];
            }
        }
    };

    let mut rho0 = vec![C64::new(0.0, 0.0); dim * dim];
    // All spins down is the state with no up spins.
    let start = sec.ups.iter().position(|&u| u == 0).expect("all-down state is in the even sector");
    rho0[start * dim + start] = C64::new(1.0, 0.0);
    let sol = OdeProblem::new(rhs, params.tau_i, params.tau_f, rho0)
        .tolerances(params.rel_tol, params.abs_tol)
        .max_steps(50_000_000)
        .solve()?;

    let mut downs = 0.0;
    let mut trace = 0.0;
    for m in 0..dim {
        let p = sol.y[m * dim + m].re;
        downs += p * (nf - sec.ups[m] as f64);
        trace += p;
    }
    Ok(ChainResult { defect_density: downs / nf, trace_defect: 1.0 - trace })
}
