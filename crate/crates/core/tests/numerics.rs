use std::f64::consts::PI;

use antikz_core::ising::{defect_closed, DefectClosed};
use antikz_core::lz::{evolve_master, first_order_integrals, liouvillian, DensityMatrix2, LZParams, Liouvillian};
use antikz_core::numerics::{integrate_fixed_step, minimize_scalar, quad_adaptive, Domain, OdeProblem};
use antikz_core::optimize::kappa_opt_first;
use antikz_core::specfun::PcfFamily;
use num_complex::Complex64 as C64;

type M4 = [[C64; 4]; 4];

fn mat_mul(a: &M4, b: &M4) -> M4 {
    let mut c = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn lin(a: &M4, sa: C64, b: &M4, sb: C64) -> M4 {
    let mut c = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = sa * a[i][j] + sb * b[i][j];
        }
    }
    c
}

/// Taylor series of `e^A` for small `‖A‖`.
fn expm_small(a: &M4) -> M4 {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    let mut term = out;
    for i in 0..4 {
        out[i][i] = C64::new(1.0, 0.0);
        term[i][i] = C64::new(1.0, 0.0);
    }
    for k in 1..20 {
        term = mat_mul(&term, a);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] += term[i][j];
            }
        }
    }
    out
}

/// Fourth-order Magnus propagation with a fixed step and a Taylor
/// exponential per step.
fn magnus_oracle(gen: impl Fn(f64) -> Liouvillian, t0: f64, t1: f64, y0: [C64; 4], n: usize) -> [C64; 4] {
    let h = (t1 - t0) / n as f64;
    let c = 3f64.sqrt() / 6.0;
    let one = C64::new(1.0, 0.0);
    let mut y = y0;
    for k in 0..n {
        let t = t0 + k as f64 * h;
        let a1 = gen(t + (0.5 - c) * h);
        let a2 = gen(t + (0.5 + c) * h);
        let comm = lin(&mat_mul(&a2, &a1), one, &mat_mul(&a1, &a2), -one);
        let omega = lin(&lin(&a1, one, &a2, one), C64::new(h / 2.0, 0.0), &comm, C64::new(3f64.sqrt() / 12.0 * h * h, 0.0));
        let u = expm_small(&omega);
        let mut next = [C64::new(0.0, 0.0); 4];
        for i in 0..4 {
            for j in 0..4 {
                next[i] += u[i][j] * y[j];
            }
        }
        y = next;
    }
    y
}

#[test]
fn liouville_problem_matches_expm_oracle() {
    let p = LZParams::new(1.0, 0.0).with_window(-12.0, 12.0).with_tolerances(1e-12, 1e-14);
    let y0 = DensityMatrix2::up().to_vec();
    let oracle = magnus_oracle(|t| liouvillian(&p, t), p.tau_i, p.tau_f, y0, 12_000);

    let rhs = |t: f64, y: &[C64], dy: &mut [C64]| {
        let l = liouvillian(&p, t);
        for i in 0..4 {
            dy[i] = (0..4).map(|j| l[i][j] * y[j]).sum();
        }
    };
    let sol = OdeProblem::new(rhs, p.tau_i, p.tau_f, y0.to_vec()).tolerances(1e-12, 1e-14).solve().unwrap();
    for i in 0..4 {
        assert!((sol.y[i] - oracle[i]).norm() < 1e-9, "component {i}: {} vs {}", sol.y[i], oracle[i]);
    }
    let bloch = evolve_master(&p, &DensityMatrix2::up()).unwrap().to_vec();
    for i in 0..4 {
        assert!((bloch[i] - oracle[i]).norm() < 1e-9, "component {i}: {} vs {}", bloch[i], oracle[i]);
    }
}

#[test]
fn dissipative_liouville_problem_matches_expm_oracle() {
    let p = LZParams::new(2.0, 0.05).with_window(-8.0, 8.0).with_tolerances(1e-12, 1e-14);
    let y0 = DensityMatrix2::up().to_vec();
    let oracle = magnus_oracle(|t| liouvillian(&p, t), p.tau_i, p.tau_f, y0, 8_000);
    let rho = evolve_master(&p, &DensityMatrix2::up()).unwrap().to_vec();
    for i in 0..4 {
        assert!((rho[i] - oracle[i]).norm() < 1e-9, "component {i}");
    }
}

#[test]
fn fixed_step_convergence_order() {
    let rhs = |_t: f64, y: &[C64], dy: &mut [C64]| dy[0] = C64::i() * y[0];
    let y0 = [C64::new(1.0, 0.0)];
    let err = |n: usize| (integrate_fixed_step(rhs, 0.0, 8.0 * PI, &y0, n)[0] - 1.0).norm();
    let (e1, e2) = (err(100), err(200));
    let order = (e1 / e2).log2();
    assert!((order - 5.0).abs() < 0.3, "order {order}");
}

#[test]
fn adaptive_error_estimate_bounds_tolerance_change() {
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = -(1.0 + 0.1 * t) * y[0];
    };
    let solve = |tol: f64| OdeProblem::new(rhs, 0.0, 20.0, vec![1.0, 0.0]).tolerances(tol, tol * 1e-2).solve().unwrap();
    let a = solve(1e-8);
    let b = solve(5e-9);
    let diff = (a.y[0] - b.y[0]).abs().max((a.y[1] - b.y[1]).abs());
    assert!(diff <= a.error_estimate, "{diff} vs {}", a.error_estimate);
}

#[test]
fn quad_examples() {
    let q = quad_adaptive(|s: f64| 1.0 / (1.0 + s * s), Domain::UpperTail { a: 0.0, tail_coeff: 1.0, tail_exp: -2.0 }, 1e-11).unwrap();
    assert!((q.value - PI / 2.0).abs() < 1e-10);
    let q = quad_adaptive(|x: f64| x, Domain::Finite { a: -1.0, b: 1.0 }, 1e-12).unwrap();
    assert!(q.value.abs() < 1e-12);
}

#[test]
fn first_order_integral_is_tolerance_stable() {
    let fam = PcfFamily::new(1.0).unwrap();
    let a = first_order_integrals(&fam, 1e-7).unwrap();
    let b = first_order_integrals(&fam, 1e-9).unwrap();
    assert!(a.abs_x2.is_finite() && a.abs_x2 > 0.0);
    assert!((a.abs_x2 - b.abs_x2).abs() <= 1e-6, "{} vs {}", a.abs_x2, b.abs_x2);
}

#[test]
fn minimize_defect_expansions() {
    let l = 1e-3;
    let first = minimize_scalar(|k| defect_closed(DefectClosed::FirstOrder, k, l).unwrap(), 0.5, 200.0, 1e-6).unwrap();
    assert!((first.argmin - 9.25).abs() < 0.01, "{}", first.argmin);
    assert!((first.argmin - kappa_opt_first(l).unwrap()).abs() < 1e-5);
    // The λ² term pushes the optimum to slower sweeps. The expansion turns
    // over at κ = 1/(π²λ), so the bracket stays below that.
    let hi = 0.5 / (PI * PI * l);
    let second = minimize_scalar(|k| defect_closed(DefectClosed::SecondOrder, k, l).unwrap(), 0.5, hi, 1e-6).unwrap();
    assert!(second.argmin > first.argmin);
    let n2 = |k: f64| defect_closed(DefectClosed::SecondOrder, k, l).unwrap();
    assert!(n2(second.argmin) < n2(first.argmin));
}

#[test]
fn minimize_quadratic() {
    let m = minimize_scalar(|x| (x - 2.0) * (x - 2.0), 0.0, 5.0, 1e-8).unwrap();
    assert!((m.argmin - 2.0).abs() < 1e-8);
    assert!(minimize_scalar(|x| x, 0.0, 5.0, 1e-8).is_err());
}
