use antikz_core::ising::{defect_closed, defect_density, DefectClosed, DefectMethod, IsingParams};
use antikz_core::optimize::{
    deviation_metrics, kappa_opt_first, opt_closed, v_opt_closed, v_opt_numeric, Objective, OptMethod, VOptKind,
};
use antikz_core::Error;

const LAMBDAS: [f64; 3] = [1e-4, 1e-3, 5e-3];

#[test]
fn first_order_optimum_is_stationary() {
    for l in LAMBDAS {
        let k = kappa_opt_first(l).unwrap();
        let n = |x: f64| defect_closed(DefectClosed::FirstOrder, x, l).unwrap();
        let h = 1e-4 * k;
        let d = (n(k + h) - n(k - h)) / (2.0 * h);
        assert!(d.abs() <= 1e-8 * n(k), "l={l}: {d}");
    }
}

#[test]
fn second_order_improves_on_first() {
    for l in LAMBDAS {
        assert!(v_opt_closed(VOptKind::Second, l).unwrap() < v_opt_closed(VOptKind::First, l).unwrap());
        let a = opt_closed(VOptKind::First, l).unwrap();
        let b = opt_closed(VOptKind::Second, l).unwrap();
        assert!(b.n_min < a.n_min, "l={l}");
        assert_eq!((a.method, b.method), (OptMethod::First, OptMethod::Second));
        assert_eq!(a.v_opt_over_j2, 1.0 / a.kappa_opt);
    }
    let (z, _) = deviation_metrics(1e-3);
    let r = v_opt_closed(VOptKind::Second, 1e-3).unwrap() / v_opt_closed(VOptKind::First, 1e-3).unwrap();
    assert!((r - 0.939).abs() < 1e-3 && (r - (1.0 - z)).abs() < 1e-14);
}

#[test]
fn first_order_rate_scales_as_two_thirds() {
    for (a, b) in [(1e-4, 1e-3), (3e-4, 7e-3), (2e-3, 2.5e-3)] {
        let va = v_opt_closed(VOptKind::First, a).unwrap();
        let vb = v_opt_closed(VOptKind::First, b).unwrap();
        let slope = (vb / va).ln() / (b / a).ln();
        assert!((slope - 2.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn all_orders_optimum_is_a_minimum() {
    let p = IsingParams::new(1.0, 0.0);
    for l in [5e-4, 1e-3, 5e-3] {
        let r = v_opt_numeric(l, Objective::InfOrder, &p).unwrap();
        assert!(r.kappa_opt > 0.0 && r.n_min > 0.0 && r.n_min < 1.0);
        assert_eq!(r.method, OptMethod::InfOrder);
        for f in [0.5, 1.5] {
            assert!(defect_closed(DefectClosed::InfOrder, f * r.kappa_opt, l).unwrap() > r.n_min);
        }
        let trend = kappa_opt_first(l).unwrap() * (1.0 + deviation_metrics(l).0);
        assert!((r.kappa_opt / trend - 1.0).abs() < 0.05, "l={l}: {} vs {trend}", r.kappa_opt);
        assert!(r.v_opt_over_j2 < v_opt_closed(VOptKind::First, l).unwrap());
    }
}

#[test]
fn noiseless_has_no_optimum() {
    let p = IsingParams::new(1.0, 0.0);
    assert!(matches!(kappa_opt_first(0.0), Err(Error::NoInteriorMinimum { .. })));
    assert!(v_opt_numeric(0.0, Objective::InfOrder, &p).is_err());
    assert!(kappa_opt_first(-1.0).is_err());
}

#[test]
fn mode_sum_optimum_on_a_short_chain() {
    let p = IsingParams::new(1.0, 0.0).with_spins(10).with_window(-60.0, 60.0);
    let l = 5e-3;
    let r = v_opt_numeric(l, Objective::MasterNumeric, &p).unwrap();
    assert_eq!(r.method, OptMethod::Numeric);
    assert!(r.n_min > 0.0 && r.n_min < 1.0);
    assert!(r.evaluations <= 60, "{}", r.evaluations);
    let n = |k: f64| defect_density(&IsingParams { kappa: k, lambda: l, ..p }, DefectMethod::NumericSum).unwrap().defect_density;
    for f in [0.7, 1.4] {
        assert!(n(f * r.kappa_opt) > r.n_min);
    }
}
