//! Optimal sweep rate: the `κ` (equivalently `v/J² = 1/κ`) that minimises
//! the defect density.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ising::{defect_closed, defect_density, DefectClosed, DefectMethod, IsingParams};
use crate::numerics::minimize_scalar_with;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptMethod {
    First,
    Second,
    InfOrder,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptResult {
    pub kappa_opt: f64,
    /// `v_opt/J² = 1/κ_opt`.
    pub v_opt_over_j2: f64,
    pub n_min: f64,
    pub method: OptMethod,
    /// Objective evaluations spent; zero for closed forms.
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VOptKind {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// The closed all-orders defect density.
    InfOrder,
    /// Mode-summed master equation.
    MasterNumeric,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda == 0.0 {
        return Err(Error::NoInteriorMinimum { lo: 0.0, hi: f64::INFINITY });
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be finite and > 0")));
    }
    Ok(())
}

/// `(2⁷π²λ²)^{−1/3}`, the minimiser of the first-order defect density.
pub fn kappa_opt_first(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok((128.0 * PI * PI * lambda * lambda).powf(-1.0 / 3.0))
}

/// Closed-form `v_opt/J²` at first or second order in `λ`.
pub fn v_opt_closed(kind: VOptKind, lambda: f64) -> Result<f64> {
    let first = 1.0 / kappa_opt_first(lambda)?;
    match kind {
        VOptKind::First => Ok(first),
        VOptKind::Second => {
            let v = first - 2.0 / 3.0 * PI * PI * lambda;
            if v <= 0.0 {
                return Err(Error::Domain(format!("second-order v_opt is negative at lambda = {lambda}")));
            }
            Ok(v)
        }
    }
}

/// Closed-form optimum as an [`OptResult`], with `n_min` from the matching
/// defect expansion.
pub fn opt_closed(kind: VOptKind, lambda: f64) -> Result<OptResult> {
    let v = v_opt_closed(kind, lambda)?;
    let kappa = 1.0 / v;
    let (defect, method) = match kind {
        VOptKind::First => (DefectClosed::FirstOrder, OptMethod::First),
        VOptKind::Second => (DefectClosed::SecondOrder, OptMethod::Second),
    };
    Ok(OptResult { kappa_opt: kappa, v_opt_over_j2: v, n_min: defect_closed(defect, kappa, lambda)?, method, evaluations: 0 })
}

/// `ζ = (π⁴λ/(2⁴·3³))^{1/3}` and `ξ = (π⁴λ/(2¹⁰·3³))^{1/3}`: the relative
/// shifts of `v_opt` and `n_opt` from first to second order.
pub fn deviation_metrics(lambda: f64) -> (f64, f64) {
    let p4 = PI.powi(4) * lambda;
    ((p4 / (16.0 * 27.0)).cbrt(), (p4 / (1024.0 * 27.0)).cbrt())
}

/// Search bracket `[0.5, 10 λ^{−2/3}]` for the optimal `κ`.
pub fn kappa_bracket(lambda: f64) -> (f64, f64) {
    (0.5, 10.0 * lambda.powf(-2.0 / 3.0))
}

/// Minimises `objective(κ)` over `bracket` with a grid of `grid_points`
/// followed by golden section to relative tolerance `rel_tol` in `κ`.
pub fn minimize_defect<F>(mut objective: F, bracket: (f64, f64), grid_points: usize, rel_tol: f64) -> Result<(f64, f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut failure: Option<Error> = None;
    // Work in ln κ so the tolerance is relative.
    let m = minimize_scalar_with(
        |u| match objective(u.exp()) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        bracket.0.ln(),
        bracket.1.ln(),
        rel_tol,
        grid_points,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let m = m?;
    Ok((m.argmin.exp(), m.min, m.evaluations))
}

/// Numerical optimum of the chosen defect density. `params` supplies `N`,
/// the window and tolerances for [`Objective::MasterNumeric`]; its `κ` and
/// `λ` are ignored.
pub fn v_opt_numeric(lambda: f64, objective: Objective, params: &IsingParams) -> Result<OptResult> {
    check_lambda(lambda)?;
    let bracket = kappa_bracket(lambda);
    let (kappa, n_min, evaluations) = match objective {
        Objective::InfOrder => {
            minimize_defect(|k| defect_closed(DefectClosed::InfOrder, k, lambda), bracket, 33, 1e-9)?
        }
        Objective::MasterNumeric => minimize_defect(
            |k| {
                let p = IsingParams { kappa: k, lambda, ..*params };
                Ok(defect_density(&p, DefectMethod::NumericSum)?.defect_density)
            },
            bracket,
            17,
            1e-3,
        )?,
    };
    let method = match objective {
        Objective::InfOrder => OptMethod::InfOrder,
        Objective::MasterNumeric => OptMethod::Numeric,
    };
    Ok(OptResult { kappa_opt: kappa, v_opt_over_j2: 1.0 / kappa, n_min, method, evaluations })
}
