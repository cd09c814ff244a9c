//! Spectrum of the two-level Liouvillian and the adiabatic approximation.
//!
//! With `z = τ/(2√κ)` the Liouvillian is `√κ` times a matrix that depends on
//! `z` and `λ` only. It acts trivially on the trace and as a real 3×3 matrix
//! on the Bloch vector, so `χ₁ = 0` exactly and the other three eigenvalues
//! are the roots of
//!
//! `μ³ + 4λμ² + 4(1 + z² + λ²)μ + 8λ = 0`, `χ = √κ μ`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lz::DensityMatrix2;
use crate::numerics::{quad_adaptive, Domain};

pub type Vec4 = [C64; 4];
pub type Mat4 = [[C64; 4]; 4];

/// Eigen-decomposition of the Liouvillian at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvilleSpectrum {
    pub kappa: f64,
    pub lambda: f64,
    /// `z = τ/(2√κ)`.
    pub z: f64,
    pub eigenvalues: [C64; 4],
    /// Right eigenvectors `|χ_α⟩`.
    pub right: [Vec4; 4],
    /// Left eigenvectors `⟨χ̂_α|`, with `⟨χ̂_α|χ_β⟩ = δ_αβ`.
    pub left: [Vec4; 4],
}

impl LiouvilleSpectrum {
    /// `S`, whose columns are the right eigenvectors.
    pub fn s_matrix(&self) -> Mat4 {
        let mut s = [[C64::new(0.0, 0.0); 4]; 4];
        for (b, v) in self.right.iter().enumerate() {
            for a in 0..4 {
                s[a][b] = v[a];
            }
        }
        s
    }

    /// `S⁻¹`, whose rows are the left eigenvectors.
    pub fn s_inverse(&self) -> Mat4 {
        self.left
    }

    /// `max |⟨χ̂_α|χ_β⟩ − δ_αβ|`.
    pub fn biorthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let p: C64 = (0..4).map(|k| self.left[a][k] * self.right[b][k]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((p - target).norm());
            }
        }
        worst
    }

    /// `max_α ‖L|χ_α⟩ − χ_α|χ_α⟩‖`.
    pub fn residual(&self) -> f64 {
        let l = liouvillian_z(self.kappa, self.lambda, self.z);
        let mut worst: f64 = 0.0;
        for (chi, v) in self.eigenvalues.iter().zip(&self.right) {
            for row in 0..4 {
                let lv: C64 = (0..4).map(|k| l[row][k] * v[k]).sum();
                worst = worst.max((lv - chi * v[row]).norm());
            }
        }
        worst
    }
}

/// The Liouvillian expressed through `z = τ/(2√κ)`.
pub fn liouvillian_z(kappa: f64, lambda: f64, z: f64) -> Mat4 {
    let i = C64::i();
    let o = C64::new(0.0, 0.0);
    let c = kappa.sqrt();
    [
        [o, i * c, -i * c, o],
        [i * c, c * C64::new(-2.0 * lambda, -2.0 * z), o, -i * c],
        [-i * c, o, c * C64::new(-2.0 * lambda, 2.0 * z), i * c],
        [o, -i * c, i * c, o],
    ]
}

/// Eigenvalues and right eigenvectors from the first-order expansion in `λ`.
/// Left eigenvectors are the rows of `S⁻¹`. Intended for `λ ≤ 0.1`.
pub fn spectrum_perturbative(kappa: f64, lambda: f64, z: f64) -> LiouvilleSpectrum {
    let c = kappa.sqrt();
    let w = z * z + 1.0;
    let sw = w.sqrt();
    let i = C64::i();
    let re = |x: f64| C64::new(x, 0.0);
    let im = |x: f64| C64::new(0.0, x);

    let damp = (2.0 * z * z + 1.0) / w * lambda;
    let eigenvalues = [
        re(0.0),
        re(-c * 2.0 * lambda / w),
        -c * C64::new(damp, 2.0 * sw),
        -c * C64::new(damp, -2.0 * sw),
    ];

    let v1 = [re(FRAC_1_SQRT_2), re(0.0), re(0.0), re(FRAC_1_SQRT_2)];

    let a2 = z / (2.0 * w).sqrt();
    let b2 = 1.0 / (2.0 * w).sqrt();
    let d2 = lambda * z * sw / (2f64.sqrt() * w * w);
    let v2 = [re(a2), b2 + i * d2, b2 - i * d2, re(-a2)];

    let p = 1.0 / (2.0 * sw);
    let u = z / sw;
    let e1 = lambda * (4.0 * z * z + 1.0) / (8.0 * w * w);
    let e2 = lambda * (3.0 * z + sw) / (8.0 * w * w);
    let e3 = lambda * (3.0 * z - sw) / (8.0 * w * w);
    let v3 = [re(p) + im(e1), re(-0.5 * (1.0 + u)) + im(e2), re(0.5 * (1.0 - u)) + im(e3), re(-p) - im(e1)];
    let v4 = [re(p) - im(e1), re(0.5 * (1.0 - u)) - im(e3), re(-0.5 * (1.0 + u)) - im(e2), re(-p) + im(e1)];

    let right = [v1, v2, v3, v4];
    let left = inverse4(&columns(&right)).expect("perturbative eigenvectors are independent");
    LiouvilleSpectrum { kappa, lambda, z, eigenvalues, right, left }
}

/// Exact eigen-decomposition, with branches labelled as in
/// [`spectrum_perturbative`] by maximal eigenvector overlap.
pub fn spectrum_numeric(kappa: f64, lambda: f64, z: f64) -> Result<LiouvilleSpectrum> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!("kappa must be positive, got {kappa}")));
    }
    if !(lambda >= 0.0 && lambda.is_finite() && z.is_finite()) {
        return Err(Error::InvalidParameter(format!("need finite lambda >= 0 and z, got {lambda}, {z}")));
    }
    let c = kappa.sqrt();
    let mu = bloch_roots(lambda, z);
    for a in 0..3 {
        for b in (a + 1)..3 {
            if (mu[a] - mu[b]).norm() * c <= 1e-10 {
                return Err(Error::Degenerate { a: format!("{}", mu[a] * c), b: format!("{}", mu[b] * c) });
            }
        }
    }

    // Bloch generator divided by √κ, acting on (x, y, z_bloch).
    let m = [[-2.0 * lambda, -2.0 * z, 0.0], [2.0 * z, -2.0 * lambda, -2.0], [0.0, 2.0, 0.0]];
    let vectors: Vec<Vec4> = mu
        .iter()
        .map(|&root| {
            let v = null_vector(&m, root);
            // ρ12 = (x − iy)/2, ρ21 = (x + iy)/2, ρ11 − ρ22 = z_bloch.
            let half = 0.5;
            let mut r = [
                v[2] * half,
                (v[0] - C64::i() * v[1]) * half,
                (v[0] + C64::i() * v[1]) * half,
                -v[2] * half,
            ];
            let n = r.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            for x in &mut r {
                *x /= n;
            }
            r
        })
        .collect();

    let pert = spectrum_perturbative(kappa, lambda.min(0.1), z);
    let perm = best_pairing(&pert.right[1..], &vectors);
    let o = C64::new(0.0, 0.0);
    let mut eigenvalues = [o; 4];
    let mut right = [[o; 4]; 4];
    right[0] = pert.right[0];
    for (slot, &src) in perm.iter().enumerate() {
        let alpha = slot + 1;
        eigenvalues[alpha] = mu[src] * c;
        let mut v = vectors[src];
        let ov: C64 = (0..4).map(|k| pert.right[alpha][k].conj() * v[k]).sum();
        if ov.norm() > 0.0 {
            let phase = ov.conj() / ov.norm();
            for x in &mut v {
                *x *= phase;
            }
        }
        right[alpha] = v;
    }
    let left = inverse4(&columns(&right))
        .ok_or_else(|| Error::Degenerate { a: "eigenvector".into(), b: "eigenvector".into() })?;
    let spectrum = LiouvilleSpectrum { kappa, lambda, z, eigenvalues, right, left };
    // Near an exceptional point the roots split by ~√ε and the basis is
    // ill-conditioned even though no two computed roots coincide.
    if spectrum.biorthonormality_defect() > 1e-8 {
        return Err(Error::Degenerate { a: format!("{}", eigenvalues[2]), b: format!("{}", eigenvalues[3]) });
    }
    Ok(spectrum)
}

/// Roots `μ` of the scaled Bloch cubic: the real one first.
fn bloch_roots(lambda: f64, z: f64) -> [C64; 3] {
    let b = 4.0 * lambda;
    let cc = 4.0 * (1.0 + z * z + lambda * lambda);
    let d = 8.0 * lambda;
    let f = |x: f64| ((x + b) * x + cc) * x + d;
    let df = |x: f64| (3.0 * x + 2.0 * b) * x + cc;
    // f(−4λ) < 0 ≤ f(0): safeguarded Newton inside the bracket.
    let (mut lo, mut hi) = (-4.0 * lambda, 0.0);
    let mut x = -d / cc;
    if lambda > 0.0 {
        for _ in 0..200 {
            let fx = f(x);
            if fx == 0.0 {
                break;
            }
            if fx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let mut next = x - fx / df(x);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
                x = next;
                break;
            }
            x = next;
        }
    } else {
        x = 0.0;
    }
    // Deflate: μ³ + bμ² + cμ + d = (μ − x)(μ² + pμ + q).
    let p = b + x;
    let q = if x != 0.0 { -d / x } else { cc };
    let disc = C64::new(p * p / 4.0 - q, 0.0).sqrt();
    let r1 = -p / 2.0 - disc;
    let r2 = -p / 2.0 + disc;
    [C64::new(x, 0.0), r1, r2]
}

/// Null vector of `m − μI` for a 3×3 real `m`, from the best-conditioned
/// cross product of two rows.
fn null_vector(m: &[[f64; 3]; 3], mu: C64) -> [C64; 3] {
    let row = |i: usize| -> [C64; 3] {
        let mut r = [C64::new(m[i][0], 0.0), C64::new(m[i][1], 0.0), C64::new(m[i][2], 0.0)];
        r[i] -= mu;
        r
    };
    let cross = |a: [C64; 3], b: [C64; 3]| -> [C64; 3] {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    };
    let norm = |v: &[C64; 3]| v.iter().map(|x| x.norm_sqr()).sum::<f64>();
    let cands = [cross(row(0), row(1)), cross(row(0), row(2)), cross(row(1), row(2))];
    let mut best = cands[0];
    for c in &cands[1..] {
        if norm(c) > norm(&best) {
            best = *c;
        }
    }
    best
}

/// Assignment of `candidates` to `targets` maximising the summed overlap
/// moduli. Returns, for each target, the index of its candidate.
fn best_pairing(targets: &[Vec4], candidates: &[Vec4]) -> [usize; 3] {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let overlap = |a: &Vec4, b: &Vec4| -> f64 { (0..4).map(|k| a[k].conj() * b[k]).sum::<C64>().norm() };
    let mut best = PERMS[0];
    let mut best_score = f64::NEG_INFINITY;
    for p in PERMS {
        let score: f64 = (0..3).map(|t| overlap(&targets[t], &candidates[p[t]])).sum();
        if score > best_score {
            best_score = score;
            best = p;
        }
    }
    best
}

fn columns(vs: &[Vec4; 4]) -> Mat4 {
    let mut s = [[C64::new(0.0, 0.0); 4]; 4];
    for (b, v) in vs.iter().enumerate() {
        for a in 0..4 {
            s[a][b] = v[a];
        }
    }
    s
}

/// Gauss–Jordan inverse with partial pivoting; `None` if singular.
fn inverse4(m: &Mat4) -> Option<Mat4> {
    let o = C64::new(0.0, 0.0);
    let mut a = *m;
    let mut inv = [[o; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    let scale = m.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    for col in 0..4 {
        let piv = (col..4).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[piv][col].norm() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for k in 0..4 {
            a[col][k] /= d;
            inv[col][k] /= d;
        }
        for r in 0..4 {
            if r != col {
                let f = a[r][col];
                if f != o {
                    for k in 0..4 {
                        a[r][k] -= f * a[col][k];
                        inv[r][k] -= f * inv[col][k];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// `|⟨χ̂_α|d/dτ|χ_β⟩|` from the first-order expansion.
pub fn nonadiabatic_couplings(kappa: f64, lambda: f64, z: f64) -> [[f64; 4]; 4] {
    let w = z * z + 1.0;
    let pre = 1.0 / (2.0 * kappa.sqrt());
    let re = 1.0 / (2f64.sqrt() * w);
    let imag = lambda * (8.0 * z * z - 3.0) / (4.0 * 2f64.sqrt() * w.powf(2.5));
    let c34 = lambda * z / (4.0 * w.powf(2.5));
    let m23 = pre * re.hypot(imag);
    let m34 = pre * c34.abs();
    let mut l = [[0.0; 4]; 4];
    l[1][2] = m23;
    l[1][3] = m23;
    l[2][1] = m23;
    l[3][1] = m23;
    l[2][3] = m34;
    l[3][2] = m34;
    l
}

/// Extremal couplings `l_αβ` and gaps `r_αβ` over the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticMetrics {
    pub l: [[f64; 4]; 4],
    pub r: [[f64; 4]; 4],
}

/// Grid on `z ∈ [−10, 10]` used for the extrema, with the stationary points
/// `z = 0, ±1/2` included.
pub fn metrics_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..2001).map(|k| -10.0 + 0.01 * k as f64).collect();
    g.extend([0.0, 0.5, -0.5]);
    g
}

/// `l_αβ = max_z |⟨χ̂_α|d/dτ|χ_β⟩|` and `r_αβ = min_z |χ_α − χ_β|`.
pub fn adiabatic_metrics(kappa: f64, lambda: f64) -> AdiabaticMetrics {
    let mut l = [[0.0; 4]; 4];
    let mut r = [[f64::INFINITY; 4]; 4];
    for z in metrics_grid() {
        let c = nonadiabatic_couplings(kappa, lambda, z);
        let ev = spectrum_perturbative(kappa, lambda, z).eigenvalues;
        for a in 0..4 {
            for b in 0..4 {
                l[a][b] = f64::max(l[a][b], c[a][b]);
                if a != b {
                    r[a][b] = r[a][b].min((ev[a] - ev[b]).norm());
                }
            }
        }
    }
    for (a, row) in r.iter_mut().enumerate() {
        row[a] = 0.0;
    }
    AdiabaticMetrics { l, r }
}

/// State along the sweep in the adiabatic approximation, starting from
/// `c₁ = 1/√2`, `c₂ = −1/√2`. `tau_i` may be `-∞`.
pub fn adiabatic_state(kappa: f64, lambda: f64, tau: f64, tau_i: f64) -> DensityMatrix2 {
    let s = 2.0 * kappa.sqrt();
    let z = tau / s;
    let zi = tau_i / s;
    let w = z * z + 1.0;
    let decay = (-4.0 * lambda * kappa * (z.atan() - zi.atan())).exp();
    let u = if z.is_infinite() { z.signum() } else { z / w.sqrt() };
    let r12 = -0.5 * decay * C64::new(1.0 / w.sqrt(), lambda * u / w);
    DensityMatrix2 {
        r11: C64::new(0.5 * (1.0 - u * decay), 0.0),
        r12,
        r21: r12.conj(),
        r22: C64::new(0.5 * (1.0 + u * decay), 0.0),
    }
}

/// `diag(½(1 − e^{−4πλκ}), ½(1 + e^{−4πλκ}))`, the infinite-window limit.
pub fn adiabatic_final_state(kappa: f64, lambda: f64) -> DensityMatrix2 {
    if kappa < 1.0 {
        log::warn!("adiabatic approximation used at kappa = {kappa} < 1");
    }
    let e = (-4.0 * PI * lambda * kappa).exp();
    DensityMatrix2::diagonal(0.5 * (1.0 - e), 0.5 * (1.0 + e))
}

/// `∫ Re χ₂ dτ` over the whole sweep with the exact eigenvalue. To first
/// order in `λ` this is `−4πλκ`.
///
/// The integral is taken in `θ = arctan z`, which maps the line onto a
/// finite interval with a smooth integrand.
pub fn chi2_integral_check(kappa: f64, lambda: f64) -> Result<f64> {
    if !(kappa > 0.0 && lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!("need kappa > 0 and lambda >= 0, got {kappa}, {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let integrand = |theta: f64| {
        let z = theta.tan();
        let sec2 = 1.0 + z * z;
        bloch_roots(lambda, z)[0].re * sec2
    };
    let tol = 1e-12 * lambda;
    let q = quad_adaptive(integrand, Domain::Finite { a: -PI / 2.0, b: PI / 2.0 }, tol)?;
    // dτ = 2√κ dz and χ = √κ μ.
    Ok(2.0 * kappa * q.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots_satisfy_polynomial() {
        for &(l, z) in &[(0.0, 0.0), (1e-3, 0.3), (0.05, -2.0), (0.5, 7.0), (2.0, 0.1)] {
            for mu in bloch_roots(l, z) {
                let p = ((mu + 4.0 * l) * mu + 4.0 * (1.0 + z * z + l * l)) * mu + 8.0 * l;
                assert!(p.norm() < 1e-12 * (1.0 + mu.norm().powi(3)), "{l} {z} {mu}");
            }
        }
    }

    #[test]
    fn trace_of_spectrum() {
        let sp = spectrum_numeric(9.0, 0.02, 0.4).unwrap();
        let sum: C64 = sp.eigenvalues.iter().sum();
        assert!((sum - C64::new(-4.0 * 0.02 * 3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn numeric_spectrum_is_an_eigendecomposition() {
        let sp = spectrum_numeric(4.0, 0.01, -1.3).unwrap();
        assert!(sp.residual() < 1e-12);
        assert!(sp.biorthonormality_defect() < 1e-12);
    }

    #[test]
    fn perturbative_spectrum_substitution() {
        let sp = spectrum_perturbative(25.0, 1e-2, 1.0);
        assert!((sp.eigenvalues[1].re + 5e-2).abs() < 1e-15);
        let sp0 = spectrum_perturbative(1.0, 0.0, 0.0);
        assert_eq!(sp0.eigenvalues[1], C64::new(0.0, 0.0));
        assert!((sp0.eigenvalues[2] - C64::new(0.0, -2.0)).norm() < 1e-15);
        assert!((sp0.eigenvalues[3] - C64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_noise_numeric_matches_perturbative() {
        for &z in &[-3.0, -0.2, 0.0, 0.7, 5.0] {
            let n = spectrum_numeric(2.0, 0.0, z).unwrap();
            let p = spectrum_perturbative(2.0, 0.0, z);
            for a in 0..4 {
                assert!((n.eigenvalues[a] - p.eigenvalues[a]).norm() < 1e-10);
                for k in 0..4 {
                    assert!((n.right[a][k] - p.right[a][k]).norm() < 1e-10, "{z} {a} {k}");
                }
            }
        }
    }

    #[test]
    fn adiabatic_state_limits() {
        let s = adiabatic_state(10.0, 0.0, -1e9, f64::NEG_INFINITY);
        assert!((s.p_up() - 1.0).abs() < 1e-9);
        let f = adiabatic_state(10.0, 1e-3, f64::INFINITY, f64::NEG_INFINITY);
        let g = adiabatic_final_state(10.0, 1e-3);
        assert!((f.p_up() - g.p_up()).abs() < 1e-14);
    }

    #[test]
    fn l34_stationary_value() {
        let m = adiabatic_metrics(25.0, 1e-2);
        let expect = 2.0 * 1e-2 / (25.0 * (5.0f64 * 25.0).sqrt());
        assert!((m.l[2][3] - expect).abs() < 1e-12 * expect.max(1.0));
    }
}
