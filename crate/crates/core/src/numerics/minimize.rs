//! Bracketed scalar minimization: coarse grid scan, then golden-section
//! refinement around the best grid point.

use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub min: f64,
    pub evaluations: usize,
}

/// Minimizes `f` on `[lo, hi]` to an absolute argument tolerance `tol`.
///
/// The grid is logarithmic when `lo > 0`, linear otherwise.
pub fn minimize_scalar<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Minimum> {
    minimize_scalar_with(f, lo, hi, tol, DEFAULT_GRID_POINTS)
}

pub fn minimize_scalar_with<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64, grid_points: usize) -> Result<Minimum> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!("bad bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) || grid_points < 3 {
        return Err(Error::InvalidParameter("tolerance must be positive and grid at least 3 points".into()));
    }
    let n = grid_points;
    let xs: Vec<f64> = if lo > 0.0 {
        let (l0, l1) = (lo.ln(), hi.ln());
        (0..n).map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()).collect()
    } else {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    };
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut evals = n;
    let mut best = 0;
    for i in 1..n {
        if fs[i] < fs[best] {
            best = i;
        }
    }
    if best == 0 || best == n - 1 {
        return Err(Error::NoInteriorMinimum { lo, hi });
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (xs[best - 1], xs[best + 1]);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    evals += 2;
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    let (mut argmin, mut min) = if fc < fd { (c, fc) } else { (d, fd) };
    if fs[best] < min {
        argmin = xs[best];
        min = fs[best];
    }
    Ok(Minimum { argmin, min, evaluations: evals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let m = minimize_scalar(|x| (x - 2.0).powi(2), 0.0, 5.0, 1e-8).unwrap();
        assert!((m.argmin - 2.0).abs() < 1e-8);
    }

    #[test]
    fn log_grid_bracket() {
        let m = minimize_scalar(|x: f64| x + 100.0 / x, 0.5, 200.0, 1e-7).unwrap();
        assert!((m.argmin - 10.0).abs() < 1e-6);
    }

    #[test]
    fn monotone_function_has_no_interior_minimum() {
        let r = minimize_scalar(|x| x, 1.0, 2.0, 1e-6);
        assert!(matches!(r, Err(Error::NoInteriorMinimum { .. })));
    }
}
