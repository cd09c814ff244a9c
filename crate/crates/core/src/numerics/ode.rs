//! Dormand–Prince 5(4) integrator for real or complex vector ODEs.
//!
//! Steps are controlled by a PI controller on the scaled RMS norm of the
//! embedded error estimate. Integration may run backward (`t1 < t0`). Output
//! is available at the endpoint and at optional sample times, which the
//! integrator steps onto exactly.

use super::scalar::Scalar;
use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// An initial value problem `y' = rhs(t, y)`, `y(t0) = y0`, integrated to `t1`.
pub struct OdeProblem<T, F> {
    pub rhs: F,
    pub t0: f64,
    pub t1: f64,
    pub y0: Vec<T>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Largest allowed step magnitude. Defaults to the full interval.
    pub h_max: Option<f64>,
    /// Times at which the state is recorded, ordered along the direction of
    /// integration and within `[t0, t1]`.
    pub sample_times: Vec<f64>,
}

impl<T: Scalar, F> OdeProblem<T, F>
where
    F: FnMut(f64, &[T], &mut [T]),
{
    pub fn new(rhs: F, t0: f64, t1: f64, y0: Vec<T>) -> Self {
        Self {
            rhs,
            t0,
            t1,
            y0,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 5_000_000,
            h_max: None,
            sample_times: Vec::new(),
        }
    }

    pub fn tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn max_steps(mut self, n: usize) -> Self {
        self.max_steps = n;
        self
    }

    pub fn h_max(mut self, h: f64) -> Self {
        self.h_max = Some(h);
        self
    }

    pub fn samples(mut self, times: Vec<f64>) -> Self {
        self.sample_times = times;
        self
    }

    pub fn solve(self) -> Result<OdeSolution<T>> {
        integrate_ode(self)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Debug, Clone)]
pub struct OdeSolution<T> {
    pub t: f64,
    pub y: Vec<T>,
    pub stats: OdeStats,
    /// Sum over accepted steps of the largest component of the local error
    /// estimate. A heuristic bound on the global error.
    pub error_estimate: f64,
    /// States at the requested sample times, in order.
    pub samples: Vec<Vec<T>>,
}

struct Stages<T> {
    k: [Vec<T>; 7],
    tmp: Vec<T>,
    y_new: Vec<T>,
    err: Vec<T>,
}

impl<T: Scalar> Stages<T> {
    fn new(n: usize) -> Self {
        let z = vec![T::zero(); n];
        Self {
            k: std::array::from_fn(|_| z.clone()),
            tmp: z.clone(),
            y_new: z.clone(),
            err: z,
        }
    }
}

/// One Dormand–Prince step from `(t, y)` with `k[0] = f(t, y)` already filled.
/// Leaves the fifth-order solution in `y_new`, the error estimate in `err`
/// and `f(t + h, y_new)` in `k[6]`.
fn dp_step<T: Scalar, F>(rhs: &mut F, t: f64, y: &[T], h: f64, s: &mut Stages<T>)
where
    F: FnMut(f64, &[T], &mut [T]),
{
    let n = y.len();
    let Stages { k, tmp, y_new, err } = s;
    let [k1, k2, k3, k4, k5, k6, k7] = k;
    // Equal-length reslices let the compiler drop bounds checks.
    let (k1, k2, k3, k4, k5, k6, k7) = (&mut k1[..n], &mut k2[..n], &mut k3[..n], &mut k4[..n], &mut k5[..n], &mut k6[..n], &mut k7[..n]);
    let (tmp, y_new, err) = (&mut tmp[..n], &mut y_new[..n], &mut err[..n]);

    for i in 0..n {
        tmp[i] = y[i] + k1[i] * (h * A21);
    }
    rhs(t + C2 * h, tmp, k2);
    for i in 0..n {
        tmp[i] = y[i] + (k1[i] * A31 + k2[i] * A32) * h;
    }
    rhs(t + C3 * h, tmp, k3);
    for i in 0..n {
        tmp[i] = y[i] + (k1[i] * A41 + k2[i] * A42 + k3[i] * A43) * h;
    }
    rhs(t + C4 * h, tmp, k4);
    for i in 0..n {
        tmp[i] = y[i] + (k1[i] * A51 + k2[i] * A52 + k3[i] * A53 + k4[i] * A54) * h;
    }
    rhs(t + C5 * h, tmp, k5);
    for i in 0..n {
        tmp[i] =
            y[i] + (k1[i] * A61 + k2[i] * A62 + k3[i] * A63 + k4[i] * A64 + k5[i] * A65) * h;
    }
    rhs(t + h, tmp, k6);
    for i in 0..n {
        y_new[i] =
            y[i] + (k1[i] * A71 + k3[i] * A73 + k4[i] * A74 + k5[i] * A75 + k6[i] * A76) * h;
    }
    rhs(t + h, y_new, k7);
    for i in 0..n {
        err[i] = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
            * h;
    }
}

fn error_norm<T: Scalar>(y: &[T], y_new: &[T], err: &[T], rtol: f64, atol: f64) -> f64 {
    let n = y.len();
    let (y_new, err) = (&y_new[..n], &err[..n]);
    let mut acc = 0.0;
    for i in 0..n {
        let sc = atol + rtol * y[i].magnitude().max(y_new[i].magnitude());
        let r = err[i].magnitude() / sc;
        acc += r * r;
    }
    (acc / y.len() as f64).sqrt()
}

#[allow(clippy::too_many_arguments)]
fn initial_step<T: Scalar, F>(rhs: &mut F, t0: f64, y0: &[T], f0: &[T], dir: f64, rtol: f64, atol: f64, h_max: f64) -> f64
where
    F: FnMut(f64, &[T], &mut [T]),
{
    let n = y0.len();
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..n {
        let sc = atol + rtol * y0[i].magnitude();
        d0 += (y0[i].magnitude() / sc).powi(2);
        d1 += (f0[i].magnitude() / sc).powi(2);
    }
    d0 = (d0 / n as f64).sqrt();
    d1 = (d1 / n as f64).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(h_max);
    let y1: Vec<T> = (0..n).map(|i| y0[i] + f0[i] * (dir * h0)).collect();
    let mut f1 = vec![T::zero(); n];
    rhs(t0 + dir * h0, &y1, &mut f1);
    let mut d2 = 0.0;
    for i in 0..n {
        let sc = atol + rtol * y0[i].magnitude();
        d2 += ((f1[i] - f0[i]).magnitude() / sc).powi(2);
    }
    d2 = (d2 / n as f64).sqrt() / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(h_max)
}

/// Integrates `problem` with adaptive step control.
pub fn integrate_ode<T: Scalar, F>(problem: OdeProblem<T, F>) -> Result<OdeSolution<T>>
where
    F: FnMut(f64, &[T], &mut [T]),
{
    let OdeProblem { mut rhs, t0, t1, y0, rel_tol, abs_tol, max_steps, h_max, sample_times } = problem;
    if !(rel_tol > 0.0 && abs_tol > 0.0) {
        return Err(Error::InvalidParameter("ODE tolerances must be positive".into()));
    }
    let n = y0.len();
    let mut stats = OdeStats::default();
    let mut samples = Vec::with_capacity(sample_times.len());
    let mut y = y0;
    if t1 == t0 || n == 0 {
        for _ in &sample_times {
            samples.push(y.clone());
        }
        return Ok(OdeSolution { t: t1, y, stats, error_estimate: 0.0, samples });
    }

    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let h_max = h_max.unwrap_or(span).min(span);
    let mut st = Stages::new(n);
    rhs(t0, &y, &mut st.k[0]);
    stats.rhs_evals += 1;
    let mut h = initial_step(&mut rhs, t0, &y, &st.k[0], dir, rel_tol, abs_tol, h_max);
    stats.rhs_evals += 1;

    const SAFETY: f64 = 0.9;
    const BETA: f64 = 0.04;
    const ALPHA: f64 = 0.2 - 0.75 * BETA;
    let mut ln_err_prev: f64 = 1e-4f64.ln();
    let mut t = t0;
    let mut error_estimate = 0.0;
    let mut next_sample = 0;
    let mut last_rejected = false;

    // Samples at or before the start are recorded immediately.
    while next_sample < sample_times.len() && (sample_times[next_sample] - t0) * dir <= 0.0 {
        samples.push(y.clone());
        next_sample += 1;
    }

    loop {
        if stats.accepted + stats.rejected >= max_steps {
            return Err(Error::MaxSteps(max_steps));
        }
        let target = if next_sample < sample_times.len() { sample_times[next_sample] } else { t1 };
        let remaining = (target - t) * dir;
        let mut hit_target = false;
        let h_ctrl = h;
        if h >= remaining {
            h = remaining;
            hit_target = true;
        }
        if h < 1e-14 * t.abs().max(1.0) {
            if hit_target && remaining <= 1e-14 * t.abs().max(1.0) {
                // Target coincides with current time.
                t = target;
            } else {
                return Err(Error::StepUnderflow { t });
            }
        } else {
            dp_step(&mut rhs, t, &y, dir * h, &mut st);
            stats.rhs_evals += 6;
            let err = error_norm(&y, &st.y_new, &st.err, rel_tol, abs_tol);
            if !err.is_finite() {
                if h < 1e-12 {
                    return Err(Error::NonFinite { t });
                }
                h *= 0.1;
                stats.rejected += 1;
                last_rejected = true;
                continue;
            }
            if err <= 1.0 {
                stats.accepted += 1;
                error_estimate += st.err.iter().map(|e| e.magnitude()).fold(0.0, f64::max);
                t = if hit_target { target } else { t + dir * h };
                std::mem::swap(&mut y, &mut st.y_new);
                let (k1, rest) = st.k.split_at_mut(1);
                std::mem::swap(&mut k1[0], &mut rest[5]);
                let ln_e = err.max(1e-10).ln();
                let mut fac = SAFETY * (BETA * ln_err_prev - ALPHA * ln_e).exp();
                fac = fac.clamp(0.2, 10.0);
                if last_rejected {
                    fac = fac.min(1.0);
                }
                ln_err_prev = ln_e;
                last_rejected = false;
                h = if hit_target {
                    // A clamped step says little about the natural step size.
                    h_ctrl.max(h * fac).min(h_max)
                } else {
                    (h * fac).min(h_max)
                };
            } else {
                stats.rejected += 1;
                last_rejected = true;
                h *= (SAFETY * err.powf(-ALPHA)).max(0.2);
                continue;
            }
        }
        if hit_target || t == target {
            if next_sample < sample_times.len() {
                while next_sample < sample_times.len() && (sample_times[next_sample] - t) * dir <= 0.0 {
                    samples.push(y.clone());
                    next_sample += 1;
                }
                if (t1 - t) * dir <= 0.0 {
                    break;
                }
            } else {
                break;
            }
        }
    }
    // Samples past t1 are clamped to the final state.
    while samples.len() < sample_times.len() {
        samples.push(y.clone());
    }
    Ok(OdeSolution { t: t1, y, stats, error_estimate, samples })
}

/// Classical fixed-step integration with the fifth-order Dormand–Prince
/// weights. Used for convergence-order checks.
pub fn integrate_fixed_step<T: Scalar, F>(mut rhs: F, t0: f64, t1: f64, y0: &[T], n_steps: usize) -> Vec<T>
where
    F: FnMut(f64, &[T], &mut [T]),
{
    let n = y0.len();
    let h = (t1 - t0) / n_steps as f64;
    let mut st = Stages::new(n);
    let mut y = y0.to_vec();
    let mut t = t0;
    rhs(t, &y, &mut st.k[0]);
    for _ in 0..n_steps {
        dp_step(&mut rhs, t, &y, h, &mut st);
        std::mem::swap(&mut y, &mut st.y_new);
        let (k1, rest) = st.k.split_at_mut(1);
        std::mem::swap(&mut k1[0], &mut rest[5]);
        t += h;
    }
    y
}
