use std::f64::consts::PI;

use antikz_core::adiabatic::{
    adiabatic_final_state, adiabatic_metrics, adiabatic_state, chi2_integral_check, liouvillian_z,
    spectrum_numeric, spectrum_perturbative,
};
use antikz_core::lz::{evolve_master, DensityMatrix2, LZParams};
use antikz_core::Error;
use num_complex::Complex64 as C64;

const GRID: [(f64, f64); 6] = [(1.0, 0.0), (4.0, 1e-3), (25.0, 1e-2), (100.0, 1e-3), (0.5, 0.1), (10.0, 0.05)];
const ZS: [f64; 7] = [-20.0, -1.5, -0.5, 0.0, 0.3, 2.0, 50.0];

#[test]
fn numeric_spectrum_diagonalizes_the_generator() {
    for (k, l) in GRID {
        for z in ZS {
            let s = spectrum_numeric(k, l, z).unwrap();
            let m = liouvillian_z(k, l, z);
            for a in 0..4 {
                let v = s.right[a];
                let scale = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
                for i in 0..4 {
                    let mv: C64 = (0..4).map(|j| m[i][j] * v[j]).sum();
                    assert!((mv - s.eigenvalues[a] * v[i]).norm() < 1e-10 * k.sqrt().max(1.0) * scale, "k={k} l={l} z={z} a={a}");
                }
                let w = s.left[a];
                for j in 0..4 {
                    let wm: C64 = (0..4).map(|i| w[i] * m[i][j]).sum();
                    assert!((wm - s.eigenvalues[a] * w[j]).norm() < 1e-8 * k.sqrt().max(1.0), "left k={k} l={l} z={z} a={a}");
                }
            }
            assert!(s.biorthonormality_defect() < 1e-8);
        }
    }
}

#[test]
fn stationary_eigenvalue_is_exactly_zero() {
    for (k, l) in GRID {
        for z in ZS {
            assert_eq!(spectrum_numeric(k, l, z).unwrap().eigenvalues[0], C64::new(0.0, 0.0));
            // (1, 0, 0, 1) annihilates the generator from the left.
            let m = liouvillian_z(k, l, z);
            for j in 0..4 {
                assert_eq!(m[0][j] + m[3][j], C64::new(0.0, 0.0));
            }
        }
    }
}

#[test]
fn eigenvalue_sum_is_trace() {
    for (k, l) in GRID {
        for z in ZS {
            let s: C64 = spectrum_numeric(k, l, z).unwrap().eigenvalues.iter().sum();
            assert!((s - C64::new(-4.0 * l * k.sqrt(), 0.0)).norm() < 1e-10 * k.sqrt());
        }
    }
}

#[test]
fn numeric_and_perturbative_agree() {
    for k in [1.0, 9.0, 100.0] {
        for z in ZS {
            let n = spectrum_numeric(k, 0.0, z).unwrap();
            let p = spectrum_perturbative(k, 0.0, z);
            for a in 0..4 {
                assert!((n.eigenvalues[a] - p.eigenvalues[a]).norm() < 1e-10);
            }
        }
    }
    let n = spectrum_numeric(100.0, 1e-3, 0.0).unwrap();
    let p = spectrum_perturbative(100.0, 1e-3, 0.0);
    assert!((n.eigenvalues[1] - p.eigenvalues[1]).norm() <= 1e-6);
    for a in 1..4 {
        assert!((n.eigenvalues[a] - p.eigenvalues[a]).norm() < 1e-4, "branch {a}");
    }
}

#[test]
fn perturbative_spectrum_is_dissipative() {
    for (k, l) in GRID {
        for z in ZS {
            let s = spectrum_perturbative(k, l, z);
            assert_eq!(s.eigenvalues[0], C64::new(0.0, 0.0));
            for a in 1..4 {
                assert!(s.eigenvalues[a].re <= 0.0);
            }
        }
    }
    let s = spectrum_perturbative(25.0, 1e-2, 1.0);
    assert!((s.eigenvalues[1].re + 5e-2).abs() < 1e-15);
}

#[test]
fn coalescing_branches_are_rejected() {
    // At λ=2, z=0 the Bloch cubic has the double root μ = −2.
    assert!(matches!(spectrum_numeric(1.0, 2.0, 0.0), Err(Error::Degenerate { .. })));
    assert!(spectrum_numeric(1.0, 1.9, 0.0).is_ok());
}

#[test]
fn adiabatic_condition_metrics() {
    let m = adiabatic_metrics(4.0, 0.0);
    for b in 1..4 {
        assert_eq!(m.l[0][b], 0.0);
    }
    for a in 0..4 {
        assert_eq!(m.l[a][a], 0.0);
        for b in 0..4 {
            assert_eq!(m.l[a][b], m.l[b][a]);
        }
    }
    assert!((m.l[1][2] - 1.0 / (2.0 * 8f64.sqrt())).abs() < 1e-4, "{}", m.l[1][2]);
    assert!((m.l[1][2] - 0.17678).abs() < 1e-4);
    assert!((m.r[1][2] - 4.0).abs() < 1e-9, "{}", m.r[1][2]);
    let m = adiabatic_metrics(25.0, 1e-2);
    assert!((m.l[2][3] / 7.16e-5 - 1.0).abs() < 0.01, "{}", m.l[2][3]);
}

#[test]
fn adiabatic_final_state_limits() {
    let r = adiabatic_final_state(10.0, 0.0);
    assert_eq!((r.r11.re, r.r22.re), (0.0, 1.0));
    let r = adiabatic_final_state(1e4, 1.0);
    assert!((r.p_up() - 0.5).abs() < 1e-15);
    let mut prev = 0.0;
    for lk in [1e-3, 1e-2, 0.1, 0.3, 1.0] {
        let p = adiabatic_final_state(10.0, lk / 10.0).p_up();
        assert!(p > prev && p < 0.5);
        prev = p;
    }
}

#[test]
fn adiabatic_final_state_matches_master_equation() {
    let p = LZParams::new(100.0, 1e-3).with_tolerances(1e-10, 1e-12);
    let a = adiabatic_final_state(100.0, 1e-3).p_up();
    assert!((a - 0.5 * (1.0 - (-0.4 * PI).exp())).abs() < 1e-15);
    let m = evolve_master(&p, &DensityMatrix2::up()).unwrap().p_up();
    assert!((a / m - 1.0).abs() < 0.05, "{a} vs {m}");
}

#[test]
fn adiabatic_state_along_the_sweep() {
    let a = adiabatic_state(50.0, 2e-3, f64::INFINITY, f64::NEG_INFINITY);
    let f = adiabatic_final_state(50.0, 2e-3);
    assert!((a.p_up() - f.p_up()).abs() < 1e-14 && a.r12.norm() < 1e-14);
    let start = adiabatic_state(50.0, 2e-3, f64::NEG_INFINITY, f64::NEG_INFINITY);
    assert!((start.p_up() - 1.0).abs() < 1e-15);
    for tau in [-100.0, -5.0, 0.0, 3.0, 80.0] {
        let r = adiabatic_state(50.0, 2e-3, tau, -200.0);
        assert!((r.trace().re - 1.0).abs() < 1e-14);
        assert!(r.eigenvalues()[0] >= -1e-12 && r.eigenvalues()[1] >= -1e-12);
    }
}

#[test]
fn dephasing_exponent_from_exact_eigenvalue() {
    assert_eq!(chi2_integral_check(100.0, 0.0).unwrap(), 0.0);
    for (l, bound) in [(1e-3, 1e-4), (5e-2, 2.5e-3)] {
        let e = chi2_integral_check(100.0, l).unwrap();
        let target = -4.0 * PI * l * 100.0;
        assert!((e / target - 1.0).abs() <= bound, "l={l}: {e} vs {target}");
    }
}
