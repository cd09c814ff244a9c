//! `₁F₁(a, b, −iκx)` for real `a`, complex `b` and real `x ≥ 0`, plus the
//! error functional `E_κ(x)` that measures how far
//! `₁F₁(1/2, iκ+3/2, −iκx)` is from `1/√(1+x)`.
//!
//! Small arguments (`κx ≤ 1`) use the Maclaurin series. Larger arguments
//! start from the series at `x₀ = 1/κ` and integrate Kummer's equation in
//! `x`: `x F'' + (b + iκx) F' + iκa F = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{quad_adaptive, Domain, HermiteTable, OdeProblem};

pub const MAX_KAPPA: f64 = 200.0;
pub const MAX_X: f64 = 100.0;
const SERIES_MAX_TERMS: usize = 5000;
/// Largest tolerated ratio of the largest series term to the sum.
const MAX_CANCELLATION: f64 = 1e6;
const ODE_REL_TOL: f64 = 1e-12;

/// Maclaurin series of `M(a, b, w)`.
fn kummer_series(a: f64, b: Complex64, w: Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut max_term: f64 = 1.0;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf - 1.0) / (b + (kf - 1.0)) * w / kf;
        sum += term;
        let m = term.norm();
        max_term = max_term.max(m);
        if m <= 1e-17 * sum.norm() {
            let cancel = max_term / sum.norm();
            if cancel > MAX_CANCELLATION {
                return Err(Error::Accuracy { estimate: cancel * f64::EPSILON, tol: MAX_CANCELLATION * f64::EPSILON });
            }
            return Ok(sum);
        }
    }
    Err(Error::Accuracy { estimate: 1.0, tol: 1e-10 })
}

/// `F(x) = M(a, b, −iκx)` and `F'(x)` from the series.
fn series_value_and_slope(a: f64, b: Complex64, kappa: f64, x: f64) -> Result<(Complex64, Complex64)> {
    let w = Complex64::new(0.0, -kappa * x);
    let f = kummer_series(a, b, w)?;
    // dM/dw = (a/b) M(a+1, b+1, w), dw/dx = −iκ
    let df = Complex64::new(0.0, -kappa) * (a / b) * kummer_series(a + 1.0, b + 1.0, w)?;
    Ok((f, df))
}

fn kummer_rhs(a: f64, b: Complex64, kappa: f64) -> impl Fn(f64, &[Complex64], &mut [Complex64]) + Copy {
    let ik = Complex64::new(0.0, kappa);
    move |x, y, dy| {
        dy[0] = y[1];
        dy[1] = -((b + ik * x) * y[1] + ik * a * y[0]) / x;
    }
}

fn check_domain(kappa: f64, x: f64) -> Result<()> {
    if !(0.0..=MAX_KAPPA).contains(&kappa) || !kappa.is_finite() {
        return Err(Error::Domain(format!("kappa = {kappa} outside [0, {MAX_KAPPA}]")));
    }
    if !(0.0..=MAX_X).contains(&x) || !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} outside [0, {MAX_X}]")));
    }
    Ok(())
}

/// `₁F₁(a, b, −iκx)`.
pub fn hyp1f1_imag(a: f64, b: Complex64, kappa: f64, x: f64) -> Result<Complex64> {
    check_domain(kappa, x)?;
    if kappa * x <= 1.0 {
        return kummer_series(a, b, Complex64::new(0.0, -kappa * x));
    }
    let x0 = 1.0 / kappa;
    let (f0, df0) = series_value_and_slope(a, b, kappa, x0)?;
    let sol = OdeProblem::new(kummer_rhs(a, b, kappa), x0, x, vec![f0, df0])
        .tolerances(ODE_REL_TOL, 1e-15)
        .solve()?;
    Ok(sol.y[0])
}

/// `₁F₁(1/2, iκ+3/2, −iκx)`.
pub fn hyp1f1_half(kappa: f64, x: f64) -> Result<Complex64> {
    hyp1f1_imag(0.5, Complex64::new(1.5, kappa), kappa, x)
}

/// Samples `F = M(a, b, −iκy)` with first and second derivatives on a
/// uniform grid over `[0, x]`.
fn tabulate(a: f64, b: Complex64, kappa: f64, x: f64) -> Result<HermiteTable> {
    let h_target = (0.05f64).min(0.2 / kappa.max(1e-12));
    let n = ((x / h_target).ceil() as usize).max(2);
    let h = x / n as f64;
    let ik = Complex64::new(0.0, kappa);
    let x0 = if kappa > 0.0 { (1.0 / kappa).min(x) } else { x };
    let mut y = Vec::with_capacity(n + 1);
    let mut dy = Vec::with_capacity(n + 1);
    let mut ode_times = Vec::new();
    for j in 0..=n {
        let xj = j as f64 * h;
        if xj <= x0 {
            let (f, df) = series_value_and_slope(a, b, kappa, xj)?;
            y.push(f);
            dy.push(df);
        } else {
            ode_times.push(xj);
        }
    }
    if !ode_times.is_empty() {
        let (f0, df0) = series_value_and_slope(a, b, kappa, x0)?;
        let sol = OdeProblem::new(kummer_rhs(a, b, kappa), x0, x, vec![f0, df0])
            .tolerances(ODE_REL_TOL, 1e-15)
            .samples(ode_times)
            .solve()?;
        for s in sol.samples {
            y.push(s[0]);
            dy.push(s[1]);
        }
    }
    let d2y = (0..=n)
        .map(|j| {
            let xj = j as f64 * h;
            if xj == 0.0 {
                // From the series: F''(0) = (−iκ)² a(a+1)/(b(b+1)).
                -kappa * kappa * a * (a + 1.0) / (b * (b + 1.0))
            } else {
                -((b + ik * xj) * dy[j] + ik * a * y[j]) / xj
            }
        })
        .collect();
    Ok(HermiteTable { x0: 0.0, h, y, dy, d2y })
}

/// `E_κ(x) = 3/(4(iκ+3/2)) ∫₀ˣ (1+y)^{−1/2} ₁F₁(5/2, iκ+5/2, −iκy) dy`.
pub fn e_kappa(kappa: f64, x: f64) -> Result<Complex64> {
    check_domain(kappa, x)?;
    if x == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let b = Complex64::new(2.5, kappa);
    let table = tabulate(2.5, b, kappa, x)?;
    let q = quad_adaptive(|y: f64| table.eval(y) / (1.0 + y).sqrt(), Domain::Finite { a: 0.0, b: x }, 1e-11)?;
    Ok(3.0 / (4.0 * Complex64::new(1.5, kappa)) * q.value)
}
